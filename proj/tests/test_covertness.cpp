#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covert_mimo/capacity.hpp"
#include "covert_mimo/covertness.hpp"
#include "covert_mimo/errors.hpp"
#include "covert_mimo/gaussian.hpp"
#include "oracles.hpp"

using namespace covert_mimo;

namespace {

GsvdDecomposition random_gain_channel(oracles::Rng& rng, int m) {
  return GsvdDecomposition::from_gains(oracles::random_gains(rng, m, 0.3, 1.5),
                                       oracles::random_gains(rng, m, 0.3, 1.5));
}

Constellation optimal_constellation(const GsvdDecomposition& g, double sb2,
                                    double sw2, std::int64_t n, double delta) {
  AllocationResult a = solve_allocation_v(g, sb2, sw2);
  return build_constellation(a, g, n, delta);
}

}  // namespace

TEST_CASE("the optimal profile meets its covertness target exactly") {
  oracles::Rng rng(1);
  for (double delta : {0.05, 0.2, 0.6}) {
    GsvdDecomposition g = random_gain_channel(rng, 4);
    double sb2 = 0.4 + rng.uniform(), sw2 = 0.4 + rng.uniform();
    for (std::int64_t n : {100, 400, 1600}) {
      Constellation cst = optimal_constellation(g, sb2, sw2, n, delta);
      CHECK(product_form_v(g, cst, sw2) ==
            doctest::Approx(delta).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed-form distance recomputes from the quadratic argument") {
  oracles::Rng rng(2);
  GsvdDecomposition g = random_gain_channel(rng, 3);
  Constellation cst = optimal_constellation(g, 1.0, 0.8, 250, 0.3);
  // Off-optimal profile: scale rho down and recompute both routes.
  Eigen::VectorXd rho = 0.7 * cst.rho;
  double arg = 0.0;
  for (int j = 0; j < 3; ++j) {
    arg += std::pow(g.lambda_w(j), 4) * rho(j) * rho(j) / (4.0 * 0.8 * 0.8);
  }
  arg = std::sqrt(250.0 / 2.0 * arg);
  CHECK(product_form_v(g.lambda_w, rho, 0.8, 250.0) ==
        doctest::Approx(1.0 - 2.0 * qfunc(arg)).epsilon(1e-13));
}

TEST_CASE("per-letter likelihood ratio matches the direct density ratio") {
  oracles::Rng rng(3);
  GsvdDecomposition g = random_gain_channel(rng, 3);
  double sw2 = 0.9;
  Constellation cst = optimal_constellation(g, 1.0, sw2, 100, 0.2);

  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd z(3);
    for (int j = 0; j < 3; ++j) z(j) = 3.0 * rng.normal();
    // Direct route through the two densities, stable enough at these sizes.
    double direct = 0.0;
    for (int j = 0; j < 3; ++j) {
      double a = cst.amplitude(j), lw = g.lambda_w(j);
      double plus = std::exp(-(z(j) - lw * a) * (z(j) - lw * a) / (2 * sw2));
      double minus = std::exp(-(z(j) + lw * a) * (z(j) + lw * a) / (2 * sw2));
      double null_d = std::exp(-z(j) * z(j) / (2 * sw2));
      direct += std::log(0.5 * (plus + minus) / null_d);
    }
    CHECK(mixture_llr(z, cst, g, sw2) ==
          doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("product-mixture sampler agrees with the closed form off-optimum") {
  oracles::Rng rng(4);
  GsvdDecomposition g = random_gain_channel(rng, 2);
  double sw2 = 1.1;
  Constellation cst = optimal_constellation(g, 0.7, sw2, 400, 0.2);
  // Shrink the profile so the target V is no longer the design delta.
  cst.rho *= 0.6;
  cst.amplitude = cst.rho.cwiseSqrt();

  double closed = product_form_v(g, cst, sw2);
  CovertnessEstimate est = v_product_mc(cst, g, sw2, 40000, 17);
  CHECK(est.trials == 40000);
  CHECK(est.half_width > 0.0);
  CHECK(std::abs(est.value - closed) <=
        std::max(0.02, 3.0 * est.half_width));

  CovertnessEstimate again = v_product_mc(cst, g, sw2, 40000, 17);
  CHECK(est.value == again.value);
}

TEST_CASE("codebook estimator matches quadrature on a scalar two-word code") {
  // One sub-channel, one letter, words {+a, -a}: the mixture is the classic
  // symmetric binary Gaussian mixture whose distance to noise has a direct
  // quadrature oracle.
  GsvdDecomposition g = GsvdDecomposition::from_gains(
      Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, 0.8));
  double sw2 = 0.5, a = 1.3;

  Codebook code;
  code.m_words = 2;
  code.k_keys = 1;
  code.n = 1;
  code.constellation.rho = Eigen::VectorXd::Constant(1, a * a);
  code.constellation.amplitude = Eigen::VectorXd::Constant(1, a);
  code.constellation.n = 1;
  code.words.push_back(Eigen::MatrixXd::Constant(1, 1, a));
  code.words.push_back(Eigen::MatrixXd::Constant(1, 1, -a));

  double ref = oracles::bpsk_mixture_tv_oracle(0.8 * a, sw2);
  CovertnessEstimate est = v_codebook_mc(code, g, sw2, 400000, 23);
  CHECK(std::abs(est.value - ref) <= 3.0 * est.half_width + 1e-6);
}

TEST_CASE("codebook estimator approaches the product closed form when the code is rich") {
  // Short block, many words: the code-induced mixture resolves the product
  // distribution and the two estimates coincide within MC noise.
  oracles::Rng rng(5);
  GsvdDecomposition g = random_gain_channel(rng, 2);
  double sw2 = 1.0;
  Constellation cst = optimal_constellation(g, 1.0, sw2, 36, 0.2);
  Codebook code = generate_codebook(cst, 1024, 4, 31);

  double closed = product_form_v(g, cst, sw2);
  CovertnessEstimate est = v_codebook_mc(code, g, sw2, 20000, 41);
  CHECK(std::abs(est.value - closed) <= std::max(0.03, 4.0 * est.half_width));
}

TEST_CASE("the word cap rejects oversized mixtures") {
  oracles::Rng rng(6);
  GsvdDecomposition g = random_gain_channel(rng, 2);
  Constellation cst = optimal_constellation(g, 1.0, 1.0, 16, 0.2);
  Codebook code = generate_codebook(cst, 64, 2, 3);
  CHECK_THROWS_AS(v_codebook_mc(code, g, 1.0, 100, 1, /*word_cap=*/64),
                  BudgetExceeded);
}

TEST_CASE("per-letter relative entropy matches Gaussian KL quadrature") {
  oracles::Rng rng(7);
  GsvdDecomposition g = random_gain_channel(rng, 3);
  double sw2 = 0.9;
  Constellation cst = optimal_constellation(g, 1.0, sw2, 200, 0.4);

  double direct = 0.0;
  for (int j = 0; j < 3; ++j) {
    double s1 = sw2 + g.lambda_w(j) * g.lambda_w(j) * cst.rho(j);
    direct += oracles::gaussian_kl_oracle(s1, sw2);
  }
  CHECK(kl_per_letter(cst, g, sw2) == doctest::Approx(direct).epsilon(1e-8));
  CHECK(kl_per_letter(cst, g, sw2) ==
        kl_per_letter(g.lambda_w, cst.rho, sw2));
}
