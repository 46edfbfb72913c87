#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace covert_mimo {

// Kahan compensated accumulator; keeps the n-term detector sums accurate for
// blocklengths far beyond where naive summation drifts.
class KahanSum {
public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// Runs fn(trial_index) for every trial in [0, trials) and returns how many
// returned true. Work is split over threads in contiguous chunks; because
// each trial seeds its own RNG stream and counts are integers, the result is
// identical for any thread count.
template <class Fn>
std::uint64_t mc_count(std::uint64_t trials, Fn&& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw <= 1 || trials < 4096) {
    std::uint64_t count = 0;
    for (std::uint64_t t = 0; t < trials; ++t) count += fn(t) ? 1 : 0;
    return count;
  }
  unsigned workers = hw;
  std::vector<std::uint64_t> counts(workers, 0);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::uint64_t chunk = (trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::uint64_t lo = w * chunk;
    std::uint64_t hi = lo + chunk < trials ? lo + chunk : trials;
    pool.emplace_back([&, lo, hi, w] {
      std::uint64_t local = 0;
      for (std::uint64_t t = lo; t < hi; ++t) local += fn(t) ? 1 : 0;
      counts[w] = local;
    });
  }
  for (auto& th : pool) th.join();
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

}  // namespace covert_mimo
