#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covert_mimo/capacity.hpp"
#include "covert_mimo/detector.hpp"
#include "covert_mimo/errors.hpp"
#include "covert_mimo/gaussian.hpp"
#include "oracles.hpp"

using namespace covert_mimo;

namespace {

GsvdDecomposition random_gain_channel(oracles::Rng& rng, int m) {
  return GsvdDecomposition::from_gains(oracles::random_gains(rng, m, 0.3, 1.5),
                                       oracles::random_gains(rng, m, 0.3, 1.5));
}

Codebook make_code(const GsvdDecomposition& g, double sb2, double sw2,
                   std::int64_t n, std::int64_t m_words, std::int64_t k_keys,
                   std::uint64_t seed, double delta = 0.2) {
  AllocationResult a = solve_allocation_v(g, sb2, sw2);
  Constellation cst = build_constellation(a, g, n, delta);
  return generate_codebook(cst, m_words, k_keys, seed);
}

double deterministic_power(const Codebook& code, const GsvdDecomposition& g) {
  // Antipodal rows make every word's received power identical.
  return (g.lambda_b.array().square() *
          code.constellation.rho.array()).sum() *
         double(code.n);
}

}  // namespace

TEST_CASE("the statistic is the squared norm of the realigned observation") {
  oracles::Rng rng(1);
  GsvdDecomposition g = random_gain_channel(rng, 3);
  DetectorDesign d = make_detector(g, 2.0, 10, 0.9);
  Eigen::VectorXd z(3);
  z << 0.3, -1.1, 0.4;
  double direct = (d.realigner * z).squaredNorm();
  CHECK(detector_statistic(z, d.realigner) == doctest::Approx(direct));

  // Realigner = diag(ratio) U_w^T; with identity U_w it is just the ratios.
  Eigen::VectorXd manual = (g.gain_ratio().array() * z.array()).square();
  CHECK(direct == doctest::Approx(manual.sum()).epsilon(1e-13));
}

TEST_CASE("threshold sits halfway between the null mean and anticipated mean") {
  oracles::Rng rng(2);
  GsvdDecomposition g = random_gain_channel(rng, 4);
  double sw2 = 0.7, p_star = 3.1;
  std::int64_t n = 200;
  double tau = threshold_for(p_star, n, g, sw2);
  double null_mean = double(n) * sw2 * g.trace_ratio2();
  CHECK(tau == doctest::Approx(null_mean + p_star / 2.0).epsilon(1e-13));

  DetectorDesign d = make_detector(g, p_star, n, sw2);
  CHECK(d.tau == tau);
  CHECK(d.p_star == p_star);
  CHECK(d.n == n);
}

TEST_CASE("error bounds recompute from the trace formulas") {
  oracles::Rng rng(3);
  GsvdDecomposition g = random_gain_channel(rng, 3);
  double sw2 = 1.2, p_star = 5.0, b0 = 0.3, b1 = 0.4;
  std::int64_t n = 150;
  ErrorBounds eb = alpha_beta_bounds(g, p_star, n, sw2, b0, b1);

  double tr2 = g.trace_ratio2(), tr4 = g.trace_ratio4();
  double gauss = qfunc(p_star / (2.0 * std::sqrt(2.0 * n * tr4) * sw2));
  double poly = p_star * p_star * tr2 /
                (4.0 * std::sqrt(M_PI) * std::pow(double(n), 1.5) *
                 std::pow(tr4, 1.5) * sw2 * sw2);
  CHECK(eb.alpha ==
        doctest::Approx(gauss + b0 / std::sqrt(double(n))).epsilon(1e-12));
  CHECK(eb.beta == doctest::Approx(gauss + poly + b1 / std::sqrt(double(n)))
                       .epsilon(1e-12));

  double v_low = converse_covertness_lower_bound(g, p_star, n, sw2, b0, b1);
  CHECK(v_low == doctest::Approx(1.0 - eb.alpha - eb.beta).epsilon(1e-12));
  // Clamping engages for absurd slacks.
  CHECK(converse_covertness_lower_bound(g, p_star, n, sw2, 1e9, 1e9) == -1.0);
}

TEST_CASE("codeword statistics match a 200k-draw Monte Carlo moment oracle") {
  oracles::Rng rng(4);
  GsvdDecomposition g = random_gain_channel(rng, 2);
  double sw2 = 0.8;
  std::int64_t n = 16;
  Codebook code = make_code(g, 1.0, sw2, n, 2, 1, 99);
  const Eigen::MatrixXd& word = code.word(1, 0);
  SumStatistics stats = codeword_statistics(word, g, sw2);

  // Oracle: draw z = Lambda_w x + noise, realign, accumulate the sum
  // statistic, and compare empirical moments. Uses std::mt19937_64.
  Eigen::VectorXd ratio = g.gain_ratio();
  const int draws = 200000;
  double acc = 0.0, acc2 = 0.0;
  for (int t = 0; t < draws; ++t) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < 2; ++j) {
        double z = g.lambda_w(j) * word(j, i) + std::sqrt(sw2) * rng.normal();
        double s = ratio(j) * z;
        sum += s * s;
      }
    }
    acc += sum;
    acc2 += sum * sum;
  }
  double mean = acc / draws;
  double var = acc2 / draws - mean * mean;
  // Standard error of the MC mean is sqrt(var/draws); allow five of them.
  double mean_se = std::sqrt(var / draws);
  CHECK(std::abs(stats.mean - mean) <= 5.0 * mean_se);
  // Variance of the sample variance is roughly 2 var^2 / draws for near-
  // Gaussian sums; allow five standard errors as well.
  double var_se = var * std::sqrt(2.0 / draws) * 2.0;
  CHECK(std::abs(stats.variance - var) <= 5.0 * var_se);
}

TEST_CASE("closed-form statistics recompute from the trace identities") {
  oracles::Rng rng(5);
  GsvdDecomposition g = random_gain_channel(rng, 3);
  double sw2 = 1.4;
  Codebook code = make_code(g, 0.9, sw2, 32, 2, 1, 7);
  const Eigen::MatrixXd& word = code.word(0, 0);
  SumStatistics stats = codeword_statistics(word, g, sw2);

  double mean = 0.0, var = 0.0;
  for (int j = 0; j < 3; ++j) {
    double row_power = word.row(j).squaredNorm();
    double r = g.lambda_b(j) / g.lambda_w(j);
    mean += g.lambda_b(j) * g.lambda_b(j) * row_power;
    var += 4.0 * sw2 * std::pow(g.lambda_b(j), 4) /
           (g.lambda_w(j) * g.lambda_w(j)) * row_power;
    mean += 32.0 * sw2 * r * r;
    var += 2.0 * 32.0 * sw2 * sw2 * r * r * r * r;
  }
  CHECK(stats.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(stats.variance == doctest::Approx(var).epsilon(1e-12));
}

TEST_CASE("null-only Monte Carlo false alarms track the Gaussian level") {
  oracles::Rng rng(6);
  GsvdDecomposition g = random_gain_channel(rng, 3);
  double sw2 = 1.0;
  std::int64_t n = 400;
  // A power level placing tau about one standard deviation above the null
  // mean: alpha should be near Q(1).
  double sd0 = std::sqrt(2.0 * n * g.trace_ratio4()) * sw2;
  double p_star = 2.0 * sd0;
  DetectorReport rep =
      run_detector_mc(nullptr, g, p_star, n, sw2, 20000, 314);
  CHECK(std::isnan(rep.beta_mc));
  CHECK(rep.alpha_mc ==
        doctest::Approx(qfunc(1.0)).epsilon(0.08));  // Berry-Esseen slack
  CHECK(rep.alpha_mc <= rep.alpha_bound + 3.0 * rep.half_width);

  DetectorReport again =
      run_detector_mc(nullptr, g, p_star, n, sw2, 20000, 314);
  CHECK(rep.alpha_mc == again.alpha_mc);  // deterministic given the seed
}

TEST_CASE("with a codebook both error rates respect their bounds") {
  oracles::Rng rng(7);
  GsvdDecomposition g = random_gain_channel(rng, 2);
  double sb2 = 1.0, sw2 = 1.0;
  std::int64_t n = 400;
  Codebook code = make_code(g, sb2, sw2, n, 8, 2, 5);
  double p_star = deterministic_power(code, g);

  DetectorReport rep =
      run_detector_mc(&code, g, p_star, n, sw2, 20000, 2718);
  CHECK(rep.alpha_mc <= rep.alpha_bound + 3.0 * rep.half_width);
  CHECK(rep.beta_mc <= rep.beta_bound + 3.0 * rep.half_width);
  CHECK(rep.alpha_mc > 0.0);
  CHECK(rep.beta_mc > 0.0);
}

TEST_CASE("mismatched codebooks are rejected") {
  oracles::Rng rng(8);
  GsvdDecomposition g = random_gain_channel(rng, 2);
  Codebook code = make_code(g, 1.0, 1.0, 64, 4, 1, 1);
  CHECK_THROWS_AS(run_detector_mc(&code, g, 1.0, 32, 1.0, 10, 1),
                  DimensionMismatch);
  GsvdDecomposition g3 = random_gain_channel(rng, 3);
  CHECK_THROWS_AS(run_detector_mc(&code, g3, 1.0, 64, 1.0, 10, 1),
                  DimensionMismatch);
  Codebook empty;
  empty.n = 64;
  CHECK_THROWS_AS(run_detector_mc(&empty, g, 1.0, 64, 1.0, 10, 1),
                  EmptyCodebook);
}
