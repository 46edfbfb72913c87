#pragma once

#include <cstdint>

#include "covert_mimo/channel_model.hpp"

namespace covert_mimo {

// Diagonal sub-channel power profile T maximizing the intended receiver's
// throughput tr(Lambda_b^2 T) / (2 sigma_b2) subject to the adversary-side
// quadratic constraint tr(Lambda_w^4 T^2) / (4 sigma_w2^2) <= bound.
struct AllocationResult {
  Eigen::VectorXd t;      // diagonal entries, one per sub-channel
  double mu = 0.0;        // multiplier at the optimum
  double objective = 0.0; // tr(Lambda_b^2 T) / (2 sigma_b2)
};

// Left-hand side of the quadratic constraint for a given profile.
double covariance_constraint(const GsvdDecomposition& gsvd, double sigma_w2,
                             const Eigen::VectorXd& t);

// Closed forms. The variational-distance budget is 2, the relative-entropy
// budget is 1; both put T_j proportional to lambda_b_j^2 / lambda_w_j^4
// (stronger sub-channels get MORE power, the opposite of water-filling).
AllocationResult solve_allocation_v(const GsvdDecomposition& gsvd,
                                    double sigma_b2, double sigma_w2);
AllocationResult solve_allocation_d(const GsvdDecomposition& gsvd,
                                    double sigma_b2, double sigma_w2);

// Independent numeric route: bisection on the multiplier mu using only the
// stationarity system, until the constraint is tight to `tol`. Deliberately
// does not evaluate the closed-form solution.
AllocationResult numeric_allocation_oracle(const GsvdDecomposition& gsvd,
                                           double sigma_b2, double sigma_w2,
                                           double bound, double tol = 1e-10,
                                           int max_iter = 200);

// Finite-blocklength check: the code construction consumes C / (sqrt(n) d) of
// the variational-distance budget 2, leaving 2 - C/(sqrt(n) d) for the
// covariance constraint. Throws InfeasibleBudget when that is non-positive.
struct FeasibilityReport {
  bool feasible = false;
  double budget = 0.0;  // 2 - C / (sqrt(n) d)
  double margin = 0.0;  // budget - constraint value
  double shrink = 1.0;  // multiplier on T restoring feasibility
};

FeasibilityReport perturbed_feasibility(const AllocationResult& alloc,
                                        const GsvdDecomposition& gsvd,
                                        double sigma_w2, std::int64_t n,
                                        double delta, double c_margin);

// Per-symbol binary antipodal signaling derived from an allocation at
// blocklength n: rho_j = T_j * d / sqrt(n), amplitudes sqrt(rho_j), and the
// physical input covariance Q_n = V^-T diag(rho) V^-1.
struct Constellation {
  Eigen::VectorXd rho;
  Eigen::VectorXd amplitude;
  Eigen::MatrixXd q_n;
  std::int64_t n = 0;
  double delta = 0.0;
};

Constellation build_constellation(const AllocationResult& alloc,
                                  const GsvdDecomposition& gsvd, std::int64_t n,
                                  double delta);

}  // namespace covert_mimo
