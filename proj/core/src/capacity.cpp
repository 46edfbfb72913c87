#include "covert_mimo/capacity.hpp"

#include <cmath>

#include "covert_mimo/errors.hpp"
#include "covert_mimo/gaussian.hpp"

namespace covert_mimo {

CovertnessBudget CovertnessBudget::from_delta(double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw DomainError("CovertnessBudget: delta must lie strictly inside (0, 1)");
  }
  return {delta, qinv((1.0 - delta) / 2.0)};
}

double covert_capacity_v(const GsvdDecomposition& gsvd, double sigma_b2,
                         double sigma_w2) {
  return sigma_w2 / sigma_b2 * std::sqrt(2.0 * gsvd.trace_ratio4());
}

double key_throughput_v(const GsvdDecomposition& gsvd, double sigma_b2,
                        double sigma_w2) {
  double tr4 = gsvd.trace_ratio4();
  double excess = gsvd.trace_ratio2() - sigma_w2 / sigma_b2 * tr4;
  if (excess <= 0.0) return 0.0;
  return std::sqrt(2.0 / tr4) * excess;
}

double covert_capacity_d(const GsvdDecomposition& gsvd, double sigma_b2,
                         double sigma_w2) {
  return sigma_w2 / sigma_b2 * std::sqrt(gsvd.trace_ratio4());
}

double throughput_v_at(const GsvdDecomposition& gsvd, double sigma_b2,
                       double sigma_w2, double delta) {
  auto budget = CovertnessBudget::from_delta(delta);
  return covert_capacity_v(gsvd, sigma_b2, sigma_w2) * budget.d;
}

double throughput_d_at(const GsvdDecomposition& gsvd, double sigma_b2,
                       double sigma_w2, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw DomainError("throughput_d_at: delta must lie strictly inside (0, 1)");
  }
  return covert_capacity_d(gsvd, sigma_b2, sigma_w2) * std::sqrt(delta);
}

double metric_ratio(double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw DomainError("metric_ratio: delta must lie strictly inside (0, 1)");
  }
  double matched = std::sqrt(delta / 2.0);
  return std::sqrt(2.0) * qinv((1.0 - matched) / 2.0) / std::sqrt(delta);
}

CapacitySummary capacity_summary(const GsvdDecomposition& gsvd, double sigma_b2,
                                 double sigma_w2, double delta) {
  CapacitySummary s;
  s.delta = delta;
  s.c_covert_v = covert_capacity_v(gsvd, sigma_b2, sigma_w2);
  s.r_key_v = key_throughput_v(gsvd, sigma_b2, sigma_w2);
  s.c_covert_d = covert_capacity_d(gsvd, sigma_b2, sigma_w2);
  s.f_v = throughput_v_at(gsvd, sigma_b2, sigma_w2, delta);
  s.f_d = throughput_d_at(gsvd, sigma_b2, sigma_w2, delta);
  return s;
}

std::vector<MetricComparisonRow> throughput_curves(
    const GsvdDecomposition& gsvd, double sigma_b2, double sigma_w2,
    const std::vector<double>& delta_grid) {
  std::vector<MetricComparisonRow> rows;
  rows.reserve(delta_grid.size());
  for (double delta : delta_grid) {
    MetricComparisonRow row;
    row.delta = delta;
    row.f_d = throughput_d_at(gsvd, sigma_b2, sigma_w2, delta);
    row.f_v = throughput_v_at(gsvd, sigma_b2, sigma_w2, std::sqrt(delta / 2.0));
    row.ratio = row.f_v / row.f_d;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace covert_mimo
