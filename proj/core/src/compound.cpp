#include "covert_mimo/compound.hpp"

#include <cmath>
#include <string>

#include "covert_mimo/covertness.hpp"
#include "covert_mimo/errors.hpp"
#include "covert_mimo/rng.hpp"

namespace covert_mimo {
namespace {

constexpr std::uint64_t kPairStreamTag = 0x70616972u;

void check_set(const UncertaintySet& set) {
  if (set.gsvd_main.subchannels() < 1) {
    throw DimensionMismatch("compound: uncertainty set has no sub-channels");
  }
  if (!(set.lambda_0 > 0.0)) {
    throw DomainError("compound: lambda_0 must be positive");
  }
}

}  // namespace

CompoundCapacity compound_capacity(const UncertaintySet& set, double sigma_b2,
                                   double sigma_w2) {
  check_set(set);
  if (!(sigma_b2 > 0.0) || !(sigma_w2 > 0.0)) {
    throw DomainError("compound_capacity: noise variances must be positive");
  }
  const Eigen::ArrayXd lb2 = set.gsvd_main.lambda_b.array().square();
  double sum_lb4 = (lb2 * lb2).sum();
  double l02 = set.lambda_0 * set.lambda_0;

  CompoundCapacity cap;
  cap.c_covert = sigma_w2 / sigma_b2 * std::sqrt(2.0 * sum_lb4) / (l02);
  // Key+message exponent rate depends only on the main channel: the
  // adversary gains cancel between the allocation and its own throughput.
  cap.log_mk_rate = std::sqrt(2.0 / sum_lb4) * lb2.sum();
  return cap;
}

double GainGrid::axis_point(std::int64_t j) const {
  if (j < 1 || j > points_per_axis()) {
    throw IndexOutOfRange("GainGrid::axis_point: index " + std::to_string(j) +
                          " outside [1, " + std::to_string(points_per_axis()) +
                          "]");
  }
  return double(j) * eps;
}

GainGrid build_grid(const UncertaintySet& set, int depth) {
  check_set(set);
  if (depth < 1) throw DomainError("build_grid: depth must be >= 1");
  const Eigen::Index m = set.gsvd_main.subchannels();
  if (double(m) * double(depth) > 40.0) {
    throw DepthTooLarge("build_grid: m * depth = " +
                        std::to_string(m * Eigen::Index(depth)) +
                        " > 40 (conceptual grid would exceed 2^40 cells)");
  }
  GainGrid grid;
  grid.lambda_0 = set.lambda_0;
  grid.depth = depth;
  grid.m = m;
  grid.eps = std::ldexp(set.lambda_0, -depth);  // exact power-of-two scaling
  return grid;
}

std::vector<std::int64_t> locate(const GainGrid& grid,
                                 const Eigen::VectorXd& lambda) {
  if (lambda.size() != grid.m) {
    throw DimensionMismatch("locate: gain vector length mismatch");
  }
  std::vector<std::int64_t> idx(std::size_t(grid.m));
  for (Eigen::Index j = 0; j < grid.m; ++j) {
    if (!(lambda(j) > 0.0) || lambda(j) > grid.lambda_0) {
      throw DomainError("locate: gains must lie in (0, lambda_0]");
    }
    double q = std::ceil(lambda(j) / grid.eps);
    std::int64_t cell = std::int64_t(q);
    if (cell < 1) cell = 1;
    if (cell > grid.points_per_axis()) cell = grid.points_per_axis();
    idx[std::size_t(j)] = cell;
  }
  return idx;
}

MonotonicityReport covertness_monotonicity_check(const UncertaintySet& set,
                                                 const Constellation& constellation,
                                                 double sigma_w2,
                                                 std::uint64_t samples,
                                                 std::uint64_t seed) {
  check_set(set);
  const Eigen::Index m = set.gsvd_main.subchannels();
  if (constellation.rho.size() != m) {
    throw DimensionMismatch("covertness_monotonicity_check: profile mismatch");
  }

  MonotonicityReport rep;
  rep.samples = samples;
  Eigen::VectorXd outer(m), inner(m);
  std::uint64_t base = derive_seed(seed, kPairStreamTag);
  for (std::uint64_t s = 0; s < samples; ++s) {
    Xoshiro256pp rng(derive_seed(base, s));
    for (Eigen::Index j = 0; j < m; ++j) {
      outer(j) = set.lambda_0 * rng.uniform_pos();
      inner(j) = outer(j) * rng.uniform_pos();
    }
    double v_outer =
        product_form_v(outer, constellation.rho, sigma_w2, double(constellation.n));
    double v_inner =
        product_form_v(inner, constellation.rho, sigma_w2, double(constellation.n));
    double violation = v_inner - v_outer;
    if (violation > rep.worst_violation) rep.worst_violation = violation;
  }
  rep.ok = rep.worst_violation <= 1e-12;
  return rep;
}

GsvdDecomposition worst_case_gains(const UncertaintySet& set) {
  check_set(set);
  GsvdDecomposition gsvd = set.gsvd_main;
  gsvd.lambda_w = Eigen::VectorXd::Constant(gsvd.subchannels(), set.lambda_0);
  return gsvd;
}

AllocationResult worst_case_design(const UncertaintySet& set, double sigma_b2,
                                   double sigma_w2) {
  return solve_allocation_v(worst_case_gains(set), sigma_b2, sigma_w2);
}

}  // namespace covert_mimo
