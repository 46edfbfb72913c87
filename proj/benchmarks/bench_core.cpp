#include <benchmark/benchmark.h>

#include <random>

#include "covert_mimo/allocation.hpp"
#include "covert_mimo/capacity.hpp"
#include "covert_mimo/covert_code.hpp"
#include "covert_mimo/covertness.hpp"
#include "covert_mimo/detector.hpp"
#include "covert_mimo/gaussian.hpp"

using namespace covert_mimo;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& gen, int rows, int cols) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = d(gen);
  return m;
}

struct Fixture {
  GsvdDecomposition gsvd;
  Constellation cst;
  Codebook code;
  double sw2 = 1.0;

  explicit Fixture(int m, std::int64_t n, std::int64_t words) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.3, 1.5);
    Eigen::VectorXd lb(m), lw(m);
    for (int j = 0; j < m; ++j) {
      lb(j) = u(gen);
      lw(j) = u(gen);
    }
    gsvd = GsvdDecomposition::from_gains(lb, lw);
    AllocationResult alloc = solve_allocation_v(gsvd, 1.0, sw2);
    cst = build_constellation(alloc, gsvd, n, 0.2);
    code = generate_codebook(cst, words, 1, 3);
  }
};

void bm_gsvd(benchmark::State& state) {
  int m = int(state.range(0));
  std::mt19937_64 gen(11);
  Eigen::MatrixXd h_b = random_matrix(gen, m, m);
  Eigen::MatrixXd h_w = random_matrix(gen, m, m);
  ChannelPair pair{h_b, h_w, 1.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(decompose_gsvd(pair));
  }
}
BENCHMARK(bm_gsvd)->Arg(4)->Arg(8);

void bm_qinv(benchmark::State& state) {
  double p = 0.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qinv(p));
    p = 0.01 + 0.98 * (p * 997.0 - std::floor(p * 997.0));  // scrambled probe
  }
}
BENCHMARK(bm_qinv);

void bm_qinv_extreme_tail(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(qinv(1e-200));
  }
}
BENCHMARK(bm_qinv_extreme_tail);

void bm_allocation_closed_form(benchmark::State& state) {
  Fixture f(8, 64, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_allocation_v(f.gsvd, 1.0, f.sw2));
  }
}
BENCHMARK(bm_allocation_closed_form);

void bm_mixture_llr_letter(benchmark::State& state) {
  Fixture f(4, 64, 2);
  std::mt19937_64 gen(5);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::VectorXd z(4);
  for (int j = 0; j < 4; ++j) z(j) = d(gen);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mixture_llr(z, f.cst, f.gsvd, f.sw2));
  }
}
BENCHMARK(bm_mixture_llr_letter);

void bm_detector_statistic_block(benchmark::State& state) {
  std::int64_t n = state.range(0);
  Fixture f(4, n, 2);
  DetectorDesign design = make_detector(f.gsvd, 1.0, n, f.sw2);
  std::mt19937_64 gen(13);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd z = Eigen::MatrixXd::NullaryExpr(
      4, n, [&](Eigen::Index, Eigen::Index) { return d(gen); });
  for (auto _ : state) {
    double sum = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      sum += detector_statistic(z.col(i), design.realigner);
    }
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_detector_statistic_block)->Arg(400);

void bm_decode(benchmark::State& state) {
  std::int64_t words = state.range(0);
  Fixture f(4, 256, words);
  TransmissionTrace tr = transmit(f.code, 0, 0, f.gsvd, 1.0, f.sw2, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode(f.code, 0, tr.y_tilde, f.gsvd, 1.0));
  }
  state.SetItemsProcessed(state.iterations() * words);
}
BENCHMARK(bm_decode)->Arg(64)->Arg(1024);

void bm_v_product_mc_small(benchmark::State& state) {
  Fixture f(4, 400, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(v_product_mc(f.cst, f.gsvd, f.sw2, 1000, 1));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(bm_v_product_mc_small);

}  // namespace

BENCHMARK_MAIN();
