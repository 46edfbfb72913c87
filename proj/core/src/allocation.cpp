#include "covert_mimo/allocation.hpp"

#include <cmath>
#include <string>

#include "covert_mimo/capacity.hpp"
#include "covert_mimo/errors.hpp"

namespace covert_mimo {
namespace {

void check_noise(double sigma_b2, double sigma_w2) {
  if (!(sigma_b2 > 0.0) || !(sigma_w2 > 0.0)) {
    throw DomainError("allocation: noise variances must be positive");
  }
}

double objective_of(const GsvdDecomposition& gsvd, double sigma_b2,
                    const Eigen::VectorXd& t) {
  return (gsvd.lambda_b.array().square() * t.array()).sum() / (2.0 * sigma_b2);
}

}  // namespace

double covariance_constraint(const GsvdDecomposition& gsvd, double sigma_w2,
                             const Eigen::VectorXd& t) {
  if (t.size() != gsvd.subchannels()) {
    throw DimensionMismatch("covariance_constraint: profile length mismatch");
  }
  return (gsvd.lambda_w.array().square().square() * t.array().square()).sum() /
         (4.0 * sigma_w2 * sigma_w2);
}

AllocationResult solve_allocation_v(const GsvdDecomposition& gsvd,
                                    double sigma_b2, double sigma_w2) {
  check_noise(sigma_b2, sigma_w2);
  double tr4 = gsvd.trace_ratio4();
  AllocationResult out;
  out.t = 2.0 * std::sqrt(2.0) * sigma_w2 *
          (gsvd.lambda_b.array().square() /
           gsvd.lambda_w.array().square().square())
              .matrix() /
          std::sqrt(tr4);
  out.mu = sigma_w2 / (2.0 * std::sqrt(2.0) * sigma_b2) * std::sqrt(tr4);
  out.objective = objective_of(gsvd, sigma_b2, out.t);
  return out;
}

AllocationResult solve_allocation_d(const GsvdDecomposition& gsvd,
                                    double sigma_b2, double sigma_w2) {
  check_noise(sigma_b2, sigma_w2);
  double tr4 = gsvd.trace_ratio4();
  AllocationResult out;
  out.t = 2.0 * sigma_w2 *
          (gsvd.lambda_b.array().square() /
           gsvd.lambda_w.array().square().square())
              .matrix() /
          std::sqrt(tr4);
  out.mu = sigma_w2 / (2.0 * sigma_b2) * std::sqrt(tr4);
  out.objective = objective_of(gsvd, sigma_b2, out.t);
  return out;
}

AllocationResult numeric_allocation_oracle(const GsvdDecomposition& gsvd,
                                           double sigma_b2, double sigma_w2,
                                           double bound, double tol,
                                           int max_iter) {
  check_noise(sigma_b2, sigma_w2);
  if (!(bound > 0.0)) {
    throw DomainError("numeric_allocation_oracle: bound must be positive");
  }

  // Stationarity of the Lagrangian gives T_j(mu); the constraint value is
  // strictly decreasing in mu, so the tight multiplier is found by bracketing
  // and bisection.
  auto profile_at = [&](double mu) -> Eigen::VectorXd {
    return (sigma_w2 * sigma_w2 / (sigma_b2 * mu)) *
           (gsvd.lambda_b.array().square() /
            gsvd.lambda_w.array().square().square())
               .matrix();
  };
  auto constraint_at = [&](double mu) {
    return covariance_constraint(gsvd, sigma_w2, profile_at(mu));
  };

  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (constraint_at(lo) < bound) {
    lo *= 0.5;
    if (++guard > 2000) {
      throw ConvergenceFailure("numeric_allocation_oracle: bracket (low) failed");
    }
  }
  guard = 0;
  while (constraint_at(hi) > bound) {
    hi *= 2.0;
    if (++guard > 2000) {
      throw ConvergenceFailure("numeric_allocation_oracle: bracket (high) failed");
    }
  }

  double mu = 0.5 * (lo + hi);
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    mu = 0.5 * (lo + hi);
    double val = constraint_at(mu);
    if (std::abs(val - bound) <= tol * bound) {
      converged = true;
      break;
    }
    if (val > bound) {
      lo = mu;
    } else {
      hi = mu;
    }
  }
  if (!converged) {
    throw ConvergenceFailure(
        "numeric_allocation_oracle: bisection did not reach tolerance " +
        std::to_string(tol) + " within " + std::to_string(max_iter) +
        " iterations");
  }

  AllocationResult out;
  out.t = profile_at(mu);
  out.mu = mu;
  out.objective = objective_of(gsvd, sigma_b2, out.t);
  return out;
}

FeasibilityReport perturbed_feasibility(const AllocationResult& alloc,
                                        const GsvdDecomposition& gsvd,
                                        double sigma_w2, std::int64_t n,
                                        double delta, double c_margin) {
  if (n < 1) throw DomainError("perturbed_feasibility: n must be >= 1");
  if (!(c_margin >= 0.0)) {
    throw DomainError("perturbed_feasibility: C must be non-negative");
  }
  auto budget_d = CovertnessBudget::from_delta(delta);
  double budget = 2.0 - c_margin / (std::sqrt(double(n)) * budget_d.d);
  if (!(budget > 0.0)) {
    throw InfeasibleBudget(
        "perturbed_feasibility: blocklength " + std::to_string(n) +
        " leaves no covariance budget (2 - C/(sqrt(n) d) <= 0)");
  }
  double value = covariance_constraint(gsvd, sigma_w2, alloc.t);
  FeasibilityReport rep;
  rep.budget = budget;
  rep.margin = budget - value;
  rep.feasible = value <= budget * (1.0 + 1e-12);
  rep.shrink = value > 0.0 ? std::min(1.0, std::sqrt(budget / value)) : 1.0;
  return rep;
}

Constellation build_constellation(const AllocationResult& alloc,
                                  const GsvdDecomposition& gsvd, std::int64_t n,
                                  double delta) {
  if (n < 1) throw DomainError("build_constellation: n must be >= 1");
  if (alloc.t.size() != gsvd.subchannels()) {
    throw DimensionMismatch("build_constellation: profile length mismatch");
  }
  auto budget = CovertnessBudget::from_delta(delta);

  Constellation cst;
  cst.n = n;
  cst.delta = delta;
  cst.rho = alloc.t * (budget.d / std::sqrt(double(n)));
  cst.amplitude = cst.rho.cwiseSqrt();

  if (gsvd.v.rows() != gsvd.v.cols()) {
    throw DimensionMismatch("build_constellation: V must be square");
  }
  // Q_n = V^-T diag(rho) V^-1, assembled from Z = V^-T.
  Eigen::MatrixXd z = gsvd.v.transpose().partialPivLu().solve(
      Eigen::MatrixXd::Identity(gsvd.v.rows(), gsvd.v.cols()));
  cst.q_n = z * cst.rho.asDiagonal() * z.transpose();
  cst.q_n = 0.5 * (cst.q_n + cst.q_n.transpose()).eval();
  return cst;
}

}  // namespace covert_mimo
