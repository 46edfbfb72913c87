#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covert_mimo/capacity.hpp"
#include "covert_mimo/compound.hpp"
#include "covert_mimo/errors.hpp"
#include "oracles.hpp"

using namespace covert_mimo;

namespace {

UncertaintySet make_set(oracles::Rng& rng, int m, double lambda_0) {
  Eigen::VectorXd lb = oracles::random_gains(rng, m, 0.05, 0.5);
  Eigen::VectorXd lw = Eigen::VectorXd::Constant(m, lambda_0);
  return UncertaintySet{GsvdDecomposition::from_gains(lb, lw), lambda_0};
}

}  // namespace

TEST_CASE("compound capacity equals the known-channel capacity at the worst case") {
  oracles::Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    double lambda_0 = 0.02 + 0.3 * rng.uniform();
    UncertaintySet set = make_set(rng, 1 + trial % 5, lambda_0);
    double sb2 = 0.2 + rng.uniform(), sw2 = 0.2 + rng.uniform();

    CompoundCapacity cap = compound_capacity(set, sb2, sw2);
    GsvdDecomposition worst = worst_case_gains(set);
    CHECK(cap.c_covert ==
          doctest::Approx(covert_capacity_v(worst, sb2, sw2)).epsilon(1e-12));

    // Direct recomputation: (sw2/sb2) sqrt(2 sum lambda_b^4) / lambda_0^2.
    double sum4 = set.gsvd_main.lambda_b.array().pow(4).sum();
    CHECK(cap.c_covert == doctest::Approx(sw2 / sb2 * std::sqrt(2.0 * sum4) /
                                          (lambda_0 * lambda_0))
                              .epsilon(1e-12));
    // The key+message exponent does not depend on the adversary gains.
    double sum2 = set.gsvd_main.lambda_b.array().square().sum();
    CHECK(cap.log_mk_rate ==
          doctest::Approx(std::sqrt(2.0 / sum4) * sum2).epsilon(1e-12));
  }
}

TEST_CASE("the dyadic grid covers (0, lambda_0] with exact spacing") {
  oracles::Rng rng(2);
  UncertaintySet set = make_set(rng, 3, 0.4);
  GainGrid grid = build_grid(set, 5);

  CHECK(grid.eps == std::ldexp(0.4, -5));
  CHECK(grid.points_per_axis() == 32);
  CHECK(grid.axis_point(1) == grid.eps);
  CHECK(grid.axis_point(32) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(grid.log2_cells() == 15.0);
  CHECK_THROWS_AS(grid.axis_point(0), IndexOutOfRange);
  CHECK_THROWS_AS(grid.axis_point(33), IndexOutOfRange);
}

TEST_CASE("grid construction enforces the cell-count guard") {
  oracles::Rng rng(3);
  UncertaintySet set = make_set(rng, 5, 0.4);
  CHECK_NOTHROW(build_grid(set, 8));  // 5*8 = 40 allowed
  CHECK_THROWS_AS(build_grid(set, 9), DepthTooLarge);
}

TEST_CASE("locate returns the smallest covering point, brute-force checked") {
  oracles::Rng rng(4);
  UncertaintySet set = make_set(rng, 2, 1.0);
  GainGrid grid = build_grid(set, 4);  // eps = 1/16

  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd lambda(2);
    lambda << 1e-9 + (1.0 - 1e-9) * rng.uniform(),
        1e-9 + (1.0 - 1e-9) * rng.uniform();
    auto idx = locate(grid, lambda);
    REQUIRE(idx.size() == 2);
    for (int j = 0; j < 2; ++j) {
      std::int64_t want = 1;
      while (grid.axis_point(want) < lambda(j)) ++want;
      CHECK(idx[std::size_t(j)] == want);
    }
  }

  // Exact grid points map to themselves.
  Eigen::VectorXd exact(2);
  exact << grid.axis_point(3), grid.axis_point(16);
  auto idx = locate(grid, exact);
  CHECK(idx[0] == 3);
  CHECK(idx[1] == 16);

  Eigen::VectorXd outside(2);
  outside << 0.5, 1.5;
  CHECK_THROWS_AS(locate(grid, outside), DomainError);
  outside << 0.0, 0.5;
  CHECK_THROWS_AS(locate(grid, outside), DomainError);
}

TEST_CASE("closed-form covertness is monotone in the adversary gains") {
  oracles::Rng rng(5);
  UncertaintySet set = make_set(rng, 3, 0.3);
  double sb2 = 0.5, sw2 = 1.0;
  AllocationResult design = worst_case_design(set, sb2, sw2);
  Constellation cst =
      build_constellation(design, worst_case_gains(set), 400, 0.2);

  MonotonicityReport rep =
      covertness_monotonicity_check(set, cst, sw2, 2000, 11);
  CHECK(rep.ok);
  CHECK(rep.samples == 2000);
  CHECK(rep.worst_violation <= 1e-12);
}

TEST_CASE("worst-case design saturates at lambda_0 and is feasible inside the set") {
  oracles::Rng rng(6);
  UncertaintySet set = make_set(rng, 4, 0.25);
  double sb2 = 0.8, sw2 = 1.2;
  AllocationResult design = worst_case_design(set, sb2, sw2);
  GsvdDecomposition worst = worst_case_gains(set);

  CHECK(covariance_constraint(worst, sw2, design.t) ==
        doctest::Approx(2.0).epsilon(1e-12));

  // Any member of the uncertainty set sees a smaller constraint value. The
  // constraint is evaluated axis-wise so the sampled gains stay paired with
  // the profile entries they perturb.
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::VectorXd lw(4);
    for (int j = 0; j < 4; ++j) lw(j) = 0.25 * (1e-6 + (1 - 1e-6) * rng.uniform());
    double value = (lw.array().pow(4) * design.t.array().square()).sum() /
                   (4.0 * sw2 * sw2);
    CHECK(value <= 2.0 + 1e-9);
  }
}
