#pragma once

#include <cstdint>
#include <vector>

#include "covert_mimo/allocation.hpp"
#include "covert_mimo/channel_model.hpp"

namespace covert_mimo {

// Adversary-channel uncertainty: gains are aligned with the main channel's
// coordinate system but only known to satisfy 0 < lambda_w_j <= lambda_0.
// The worst case for the transmitter is lambda_w = lambda_0 on every axis.
struct UncertaintySet {
  GsvdDecomposition gsvd_main;  // supplies lambda_b (and V for precoding)
  double lambda_0 = 0.0;
};

struct CompoundCapacity {
  double c_covert = 0.0;     // nats per sqrt(n)*d, worst case over the set
  double log_mk_rate = 0.0;  // key+message exponent rate; adversary-independent
};

CompoundCapacity compound_capacity(const UncertaintySet& set, double sigma_b2,
                                   double sigma_w2);

// Dyadic gain grid used to discretize the uncertainty set: per-axis points
// j * eps for j = 1..2^depth with eps = lambda_0 * 2^-depth. Axis points are
// computed on demand; the full grid (2^(m*depth) cells) is never materialized.
struct GainGrid {
  double lambda_0 = 0.0;
  double eps = 0.0;
  int depth = 0;
  Eigen::Index m = 0;

  std::int64_t points_per_axis() const { return std::int64_t{1} << depth; }
  double axis_point(std::int64_t j) const;  // j in [1, 2^depth]
  double log2_cells() const { return double(m) * double(depth); }
};

// Guard: m * depth <= 40 keeps the conceptual cell count below 2^40.
GainGrid build_grid(const UncertaintySet& set, int depth);

// Per-axis index of the unique grid point covering each gain: the smallest
// j with lambda <= j * eps. Gains must lie in (0, lambda_0].
std::vector<std::int64_t> locate(const GainGrid& grid,
                                 const Eigen::VectorXd& lambda);

struct MonotonicityReport {
  bool ok = false;
  double worst_violation = 0.0;
  std::uint64_t samples = 0;
};

// Randomized check that the closed-form variational distance is entrywise
// monotone in the adversary gains: for sampled pairs lambda_tilde <= lambda
// (both <= lambda_0), v(lambda) >= v(lambda_tilde).
MonotonicityReport covertness_monotonicity_check(const UncertaintySet& set,
                                                 const Constellation& constellation,
                                                 double sigma_w2,
                                                 std::uint64_t samples,
                                                 std::uint64_t seed);

// Allocation against the worst-case adversary lambda_w = lambda_0 * ones;
// feasible for every member of the set by the same monotonicity.
AllocationResult worst_case_design(const UncertaintySet& set, double sigma_b2,
                                   double sigma_w2);

// The gain vector the worst-case design is computed against.
GsvdDecomposition worst_case_gains(const UncertaintySet& set);

}  // namespace covert_mimo
