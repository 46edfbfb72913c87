#pragma once

#include <cstdint>

#include "covert_mimo/covert_code.hpp"

namespace covert_mimo {

// Radiometer in the adversary's re-aligned coordinates. The per-symbol
// statistic is S_i = || diag(lambda_b/lambda_w) U_w^T z_i ||^2, equivalently
// || H_b pinv(H_w) z_i ||^2; the test compares sum_i S_i against tau.
struct DetectorDesign {
  Eigen::MatrixXd realigner;  // m x N_w
  double p_star = 0.0;        // anticipated total received power at the intended receiver
  double tau = 0.0;
  std::int64_t n = 0;
};

double detector_statistic(const Eigen::VectorXd& z,
                          const Eigen::MatrixXd& realigner);

// tau = P*/2 + n sigma_w2 trace_ratio2 splits the null mean and the
// anticipated alternative mean symmetrically.
double threshold_for(double p_star, std::int64_t n, const GsvdDecomposition& gsvd,
                     double sigma_w2);

DetectorDesign make_detector(const GsvdDecomposition& gsvd, double p_star,
                             std::int64_t n, double sigma_w2);

// Analytic error bounds for the threshold test: a shared Gaussian term
// Q(P* / (2 sqrt(2 n trace_ratio4) sigma_w2)), a polynomial correction on the
// missed-detection side, and O(1/sqrt(n)) slacks b0, b1 supplied by the caller.
struct ErrorBounds {
  double alpha = 0.0;  // false alarm
  double beta = 0.0;   // missed detection
};

ErrorBounds alpha_beta_bounds(const GsvdDecomposition& gsvd, double p_star,
                              std::int64_t n, double sigma_w2, double b0 = 0.0,
                              double b1 = 0.0);

// 1 - alpha - beta from the bounds above, clamped to [-1, 1]: any code whose
// anticipated received power reaches P* forces at least this much variational
// distance at the adversary.
double converse_covertness_lower_bound(const GsvdDecomposition& gsvd,
                                       double p_star, std::int64_t n,
                                       double sigma_w2, double b0 = 0.0,
                                       double b1 = 0.0);

// Exact mean/variance of sum_i S_i when a fixed m x n codeword is sent:
//   mean = tr(Lambda_b^2 P) + n sigma_w2 trace_ratio2
//   var  = 4 sigma_w2 tr(Lambda_b^4 Lambda_w^-2 P) + 2 n sigma_w2^2 trace_ratio4
// with P the codeword Gram matrix (only its diagonal enters).
struct SumStatistics {
  double mean = 0.0;
  double variance = 0.0;
};

SumStatistics codeword_statistics(const Eigen::MatrixXd& word,
                                  const GsvdDecomposition& gsvd,
                                  double sigma_w2);

struct DetectorReport {
  std::int64_t n = 0;
  std::uint64_t trials = 0;
  double alpha_mc = 0.0;
  double beta_mc = 0.0;  // NaN when no codebook was supplied
  double alpha_bound = 0.0;
  double beta_bound = 0.0;
  double half_width = 0.0;  // max of the per-rate binomial half-widths
};

// Empirical error rates of the threshold test. Under the null each symbol is
// pure noise; under the alternative a uniformly drawn codeword is sent.
// Passing codebook == nullptr runs the null side only.
DetectorReport run_detector_mc(const Codebook* codebook,
                               const GsvdDecomposition& gsvd, double p_star,
                               std::int64_t n, double sigma_w2,
                               std::uint64_t trials, std::uint64_t seed,
                               double b0 = 0.0, double b1 = 0.0);

}  // namespace covert_mimo
