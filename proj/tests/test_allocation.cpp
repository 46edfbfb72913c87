#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covert_mimo/allocation.hpp"
#include "covert_mimo/capacity.hpp"
#include "covert_mimo/errors.hpp"
#include "oracles.hpp"

using namespace covert_mimo;

namespace {

GsvdDecomposition random_gain_channel(oracles::Rng& rng, int m) {
  return GsvdDecomposition::from_gains(oracles::random_gains(rng, m, 0.1, 2.0),
                                       oracles::random_gains(rng, m, 0.1, 2.0));
}

}  // namespace

TEST_CASE("closed forms saturate their budgets and obey the KKT shape") {
  oracles::Rng rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    int m = 1 + trial % 5;
    GsvdDecomposition g = random_gain_channel(rng, m);
    double sb2 = 0.2 + rng.uniform();
    double sw2 = 0.2 + rng.uniform();

    AllocationResult av = solve_allocation_v(g, sb2, sw2);
    AllocationResult ad = solve_allocation_d(g, sb2, sw2);
    CHECK(covariance_constraint(g, sw2, av.t) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(covariance_constraint(g, sw2, ad.t) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // Stationarity: T_j proportional to lambda_b^2 / lambda_w^4, so the
    // normalized profile is identical for both budgets.
    for (int j = 0; j < m; ++j) {
      double shape = g.lambda_b(j) * g.lambda_b(j) /
                     std::pow(g.lambda_w(j), 4.0);
      CHECK(av.t(j) / av.t(0) ==
            doctest::Approx(shape / (g.lambda_b(0) * g.lambda_b(0) /
                                     std::pow(g.lambda_w(0), 4.0)))
                .epsilon(1e-12));
      CHECK(av.t(j) > 0.0);
    }
    CHECK((av.t.array() / ad.t.array() - std::sqrt(2.0)).abs().maxCoeff() <=
          1e-12);
  }
}

TEST_CASE("closed-form objective equals the covert capacity in budget units") {
  oracles::Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    GsvdDecomposition g = random_gain_channel(rng, 3);
    double sb2 = 0.4, sw2 = 0.9;
    AllocationResult av = solve_allocation_v(g, sb2, sw2);
    AllocationResult ad = solve_allocation_d(g, sb2, sw2);
    CHECK(av.objective ==
          doctest::Approx(covert_capacity_v(g, sb2, sw2)).epsilon(1e-12));
    CHECK(ad.objective ==
          doctest::Approx(covert_capacity_d(g, sb2, sw2)).epsilon(1e-12));
  }
}

TEST_CASE("bisection oracle reproduces both closed forms") {
  oracles::Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    GsvdDecomposition g = random_gain_channel(rng, 4);
    double sb2 = 0.3 + rng.uniform();
    double sw2 = 0.3 + rng.uniform();
    for (double bound : {2.0, 1.0}) {
      AllocationResult closed = bound == 2.0 ? solve_allocation_v(g, sb2, sw2)
                                             : solve_allocation_d(g, sb2, sw2);
      AllocationResult numeric =
          numeric_allocation_oracle(g, sb2, sw2, bound, 1e-12);
      CHECK(numeric.objective ==
            doctest::Approx(closed.objective).epsilon(1e-9));
      CHECK((numeric.t - closed.t).norm() <= 1e-8 * closed.t.norm());
    }
  }
}

TEST_CASE("profile scan confirms the closed form is a maximum") {
  // Perturb the optimal profile along random feasible directions; the
  // objective must not improve once the profile is rescaled back onto the
  // constraint surface.
  oracles::Rng rng(99);
  GsvdDecomposition g = random_gain_channel(rng, 4);
  double sb2 = 0.5, sw2 = 0.8;
  AllocationResult best = solve_allocation_v(g, sb2, sw2);

  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd dir(4);
    for (int j = 0; j < 4; ++j) dir(j) = rng.normal();
    Eigen::VectorXd cand = best.t + 0.2 * best.t.norm() * dir.normalized();
    cand = cand.cwiseMax(0.0);
    double c = covariance_constraint(g, sw2, cand);
    if (c <= 0.0) continue;
    cand *= std::sqrt(2.0 / c);  // back onto the budget surface
    double obj = (g.lambda_b.array().square() * cand.array()).sum() / (2 * sb2);
    CHECK(obj <= best.objective * (1.0 + 1e-12));
  }
}

TEST_CASE("feasibility report tracks the code-construction slack") {
  GsvdDecomposition g = GsvdDecomposition::from_gains(
      Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(2));
  AllocationResult av = solve_allocation_v(g, 1.0, 1.0);

  FeasibilityReport big_n = perturbed_feasibility(av, g, 1.0, 4000, 0.2, 1.0);
  CHECK_FALSE(big_n.feasible);  // the closed form saturates the full budget 2
  CHECK(big_n.budget < 2.0);
  CHECK(big_n.shrink < 1.0);
  CHECK(big_n.shrink > 0.0);

  // The shrunken profile becomes feasible.
  AllocationResult shrunk = av;
  shrunk.t *= big_n.shrink;
  FeasibilityReport again = perturbed_feasibility(shrunk, g, 1.0, 4000, 0.2, 1.0);
  CHECK(again.feasible);

  // Larger blocklengths consume less budget, smaller ones more.
  FeasibilityReport small_n = perturbed_feasibility(av, g, 1.0, 16, 0.2, 1.0);
  CHECK(small_n.budget < big_n.budget);

  // A margin large enough to exhaust the budget is rejected.
  double d = CovertnessBudget::from_delta(0.2).d;
  double killer = 2.1 * std::sqrt(16.0) * d;
  CHECK_THROWS_AS(perturbed_feasibility(av, g, 1.0, 16, 0.2, killer),
                  InfeasibleBudget);
}

TEST_CASE("constellation scales the profile into per-letter power") {
  oracles::Rng rng(123);
  GsvdDecomposition g = random_gain_channel(rng, 3);
  AllocationResult av = solve_allocation_v(g, 1.0, 1.0);
  std::int64_t n = 400;
  double delta = 0.2;
  Constellation cst = build_constellation(av, g, n, delta);
  double d = CovertnessBudget::from_delta(delta).d;

  CHECK(cst.n == n);
  CHECK(cst.delta == delta);
  for (int j = 0; j < 3; ++j) {
    CHECK(cst.rho(j) ==
          doctest::Approx(av.t(j) * d / std::sqrt(double(n))).epsilon(1e-13));
    CHECK(cst.amplitude(j) ==
          doctest::Approx(std::sqrt(cst.rho(j))).epsilon(1e-13));
  }
  // Identity V: the physical covariance is just diag(rho).
  CHECK((cst.q_n - Eigen::MatrixXd(cst.rho.asDiagonal())).norm() <= 1e-14);
  // Covariance is symmetric positive semidefinite by construction.
  CHECK((cst.q_n - cst.q_n.transpose()).norm() == 0.0);
}

TEST_CASE("constellation uses the inverse transpose of V when V is nontrivial") {
  oracles::Rng rng(321);
  Eigen::MatrixXd h_b, h_w;
  oracles::random_channel_pair(rng, 3, 3, 3, h_b, h_w);
  GsvdDecomposition g = decompose_gsvd(ChannelPair{h_b, h_w, 1.0, 1.0});
  AllocationResult av = solve_allocation_v(g, 1.0, 1.0);
  Constellation cst = build_constellation(av, g, 100, 0.2);
  Eigen::MatrixXd z = g.v.transpose().inverse();
  Eigen::MatrixXd want = z * cst.rho.asDiagonal() * z.transpose();
  CHECK((cst.q_n - want).norm() <= 1e-11 * want.norm());
}
