#include "covert_mimo/detector.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "covert_mimo/accumulate.hpp"
#include "covert_mimo/errors.hpp"
#include "covert_mimo/gaussian.hpp"
#include "covert_mimo/rng.hpp"

namespace covert_mimo {
namespace {

constexpr double kSqrtPi = 1.7724538509055160;
constexpr std::uint64_t kNullStreamTag = 0x64657430u;
constexpr std::uint64_t kAltStreamTag = 0x64657431u;

void check_args(double p_star, std::int64_t n, double sigma_w2) {
  if (!(p_star >= 0.0)) throw DomainError("detector: P* must be non-negative");
  if (n < 1) throw DomainError("detector: n must be >= 1");
  if (!(sigma_w2 > 0.0)) throw DomainError("detector: sigma_w2 must be positive");
}

}  // namespace

double detector_statistic(const Eigen::VectorXd& z,
                          const Eigen::MatrixXd& realigner) {
  if (z.size() != realigner.cols()) {
    throw DimensionMismatch("detector_statistic: observation length mismatch");
  }
  return (realigner * z).squaredNorm();
}

double threshold_for(double p_star, std::int64_t n, const GsvdDecomposition& gsvd,
                     double sigma_w2) {
  check_args(p_star, n, sigma_w2);
  return 0.5 * p_star + double(n) * sigma_w2 * gsvd.trace_ratio2();
}

DetectorDesign make_detector(const GsvdDecomposition& gsvd, double p_star,
                             std::int64_t n, double sigma_w2) {
  check_args(p_star, n, sigma_w2);
  DetectorDesign design;
  design.realigner =
      gsvd.gain_ratio().asDiagonal() * gsvd.u_w.transpose();
  design.p_star = p_star;
  design.tau = threshold_for(p_star, n, gsvd, sigma_w2);
  design.n = n;
  return design;
}

ErrorBounds alpha_beta_bounds(const GsvdDecomposition& gsvd, double p_star,
                              std::int64_t n, double sigma_w2, double b0,
                              double b1) {
  check_args(p_star, n, sigma_w2);
  double tr2 = gsvd.trace_ratio2();
  double tr4 = gsvd.trace_ratio4();
  double root_n = std::sqrt(double(n));
  double gauss = qfunc(p_star / (2.0 * std::sqrt(2.0 * double(n) * tr4) * sigma_w2));

  ErrorBounds bounds;
  bounds.alpha = gauss + b0 / root_n;
  bounds.beta = gauss +
                p_star * p_star * tr2 /
                    (4.0 * kSqrtPi * std::pow(double(n), 1.5) *
                     std::pow(tr4, 1.5) * sigma_w2 * sigma_w2) +
                b1 / root_n;
  return bounds;
}

double converse_covertness_lower_bound(const GsvdDecomposition& gsvd,
                                       double p_star, std::int64_t n,
                                       double sigma_w2, double b0, double b1) {
  ErrorBounds bounds = alpha_beta_bounds(gsvd, p_star, n, sigma_w2, b0, b1);
  double v = 1.0 - bounds.alpha - bounds.beta;
  if (v < -1.0) return -1.0;
  if (v > 1.0) return 1.0;
  return v;
}

SumStatistics codeword_statistics(const Eigen::MatrixXd& word,
                                  const GsvdDecomposition& gsvd,
                                  double sigma_w2) {
  if (word.rows() != gsvd.subchannels()) {
    throw DimensionMismatch("codeword_statistics: sub-channel mismatch");
  }
  if (!(sigma_w2 > 0.0)) {
    throw DomainError("codeword_statistics: sigma_w2 must be positive");
  }
  double n = double(word.cols());
  Eigen::VectorXd row_power = word.array().square().rowwise().sum();
  Eigen::ArrayXd ratio2 = gsvd.gain_ratio().array().square();

  SumStatistics stats;
  stats.mean = (gsvd.lambda_b.array().square() * row_power.array()).sum() +
               n * sigma_w2 * gsvd.trace_ratio2();
  stats.variance =
      4.0 * sigma_w2 *
          (gsvd.lambda_b.array().square() * ratio2 * row_power.array()).sum() +
      2.0 * n * sigma_w2 * sigma_w2 * gsvd.trace_ratio4();
  return stats;
}

DetectorReport run_detector_mc(const Codebook* codebook,
                               const GsvdDecomposition& gsvd, double p_star,
                               std::int64_t n, double sigma_w2,
                               std::uint64_t trials, std::uint64_t seed,
                               double b0, double b1) {
  check_args(p_star, n, sigma_w2);
  if (trials == 0) throw DomainError("run_detector_mc: trials must be > 0");
  if (codebook != nullptr) {
    if (codebook->words.empty()) {
      throw EmptyCodebook("run_detector_mc: codebook has no words");
    }
    if (codebook->n != n) {
      throw DimensionMismatch("run_detector_mc: codebook blocklength mismatch");
    }
    if (codebook->words.front().rows() != gsvd.subchannels()) {
      throw DimensionMismatch("run_detector_mc: codebook sub-channel mismatch");
    }
  }

  const Eigen::Index m = gsvd.subchannels();
  const double tau = threshold_for(p_star, n, gsvd, sigma_w2);
  const double sw = std::sqrt(sigma_w2);
  const Eigen::VectorXd ratio = gsvd.gain_ratio();

  // In re-aligned coordinates the null observation per symbol is
  // diag(ratio) * sigma_w * g, and a sent codeword adds diag(lambda_b) * x.
  auto sum_statistic = [&](std::uint64_t stream,
                           const Eigen::MatrixXd* word) {
    NormalSampler noise(stream);
    KahanSum sum;
    for (std::int64_t i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        double zhat = ratio(j) * sw * noise();
        if (word != nullptr) zhat += gsvd.lambda_b(j) * (*word)(j, i);
        sum.add(zhat * zhat);
      }
    }
    return sum.value();
  };

  std::uint64_t null_base = derive_seed(seed, kNullStreamTag);
  std::uint64_t false_alarms = mc_count(trials, [&](std::uint64_t t) {
    return sum_statistic(derive_seed(null_base, t), nullptr) > tau;
  });

  DetectorReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.alpha_mc = double(false_alarms) / double(trials);
  double hw_alpha =
      1.96 * std::sqrt(rep.alpha_mc * (1.0 - rep.alpha_mc) / double(trials));
  double hw_beta = 0.0;

  if (codebook != nullptr) {
    std::uint64_t alt_base = derive_seed(seed, kAltStreamTag);
    const std::uint64_t total = std::uint64_t(codebook->total_words());
    std::uint64_t missed = mc_count(trials, [&](std::uint64_t t) {
      std::uint64_t stream = derive_seed(alt_base, t);
      Xoshiro256pp pick(derive_seed(stream, 1));
      const Eigen::MatrixXd& word = codebook->words[std::size_t(pick() % total)];
      return sum_statistic(stream, &word) <= tau;
    });
    rep.beta_mc = double(missed) / double(trials);
    hw_beta =
        1.96 * std::sqrt(rep.beta_mc * (1.0 - rep.beta_mc) / double(trials));
  } else {
    rep.beta_mc = std::numeric_limits<double>::quiet_NaN();
  }

  ErrorBounds bounds = alpha_beta_bounds(gsvd, p_star, n, sigma_w2, b0, b1);
  rep.alpha_bound = bounds.alpha;
  rep.beta_bound = bounds.beta;
  rep.half_width = hw_alpha > hw_beta ? hw_alpha : hw_beta;
  return rep;
}

}  // namespace covert_mimo
