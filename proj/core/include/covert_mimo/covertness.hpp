#pragma once

#include <cstdint>

#include "covert_mimo/covert_code.hpp"

namespace covert_mimo {

// Cap on codebook size for the exact-mixture estimator; beyond this the
// per-sample log-sum-exp over all words stops being desk-scale.
inline constexpr std::int64_t kDefaultMixtureWordCap = 4096;

// Closed-form variational distance between n products of the per-letter
// binary-antipodal output mixture and the all-noise output:
//   1 - 2 Q( sqrt( (n/2) * sum_j lambda_w_j^4 rho_j^2 / (4 sigma_w2^2) ) ).
// With rho built from a fixed profile T at each n this is constant in n.
double product_form_v(const Eigen::VectorXd& lambda_w, const Eigen::VectorXd& rho,
                      double sigma_w2, double n);
double product_form_v(const GsvdDecomposition& gsvd,
                      const Constellation& constellation, double sigma_w2);

// Per-letter log(Q_mix / Q_noise) at one m-dimensional adversary observation:
//   sum_j [ -lambda_w_j^2 rho_j / (2 sigma_w2)
//           + logcosh(lambda_w_j a_j z_j / sigma_w2) ].
double mixture_llr(const Eigen::VectorXd& z_letter,
                   const Constellation& constellation,
                   const GsvdDecomposition& gsvd, double sigma_w2);

struct CovertnessEstimate {
  double value = 0.0;
  double half_width = 0.0;  // 95% half-width of the two-sample difference
  std::uint64_t trials = 0;
};

// Two-sample exceedance estimate of the variational distance between the
// n-fold product mixture and the all-noise measure: half the trials under
// each measure, V = P_mix[sum llr >= 0] - P_noise[sum llr >= 0].
CovertnessEstimate v_product_mc(const Constellation& constellation,
                                const GsvdDecomposition& gsvd, double sigma_w2,
                                std::uint64_t trials, std::uint64_t seed);

// Same estimator against the exact finite-codebook mixture (uniform over all
// M*K words, log-sum-exp over words per sample).
CovertnessEstimate v_codebook_mc(const Codebook& codebook,
                                 const GsvdDecomposition& gsvd, double sigma_w2,
                                 std::uint64_t trials, std::uint64_t seed,
                                 std::int64_t word_cap = kDefaultMixtureWordCap);

// Relative entropy per letter between the Gaussian-input adversary output and
// noise: 0.5 * sum_j [ u_j - log(1 + u_j) ], u_j = lambda_w_j^2 rho_j / sigma_w2.
double kl_per_letter(const Eigen::VectorXd& lambda_w, const Eigen::VectorXd& rho,
                     double sigma_w2);
double kl_per_letter(const Constellation& constellation,
                     const GsvdDecomposition& gsvd, double sigma_w2);

}  // namespace covert_mimo
