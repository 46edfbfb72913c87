#pragma once

#include <vector>

#include "covert_mimo/channel_model.hpp"

namespace covert_mimo {

// Covertness level delta and the matching Gaussian quantile
// d = qinv((1 - delta) / 2) used by the variational-distance throughput
// scaling sqrt(n) * d.
struct CovertnessBudget {
  double delta = 0.0;
  double d = 0.0;
  static CovertnessBudget from_delta(double delta);  // DomainError outside (0,1)
};

// Highest message throughput in nats per sqrt(n)*d under a variational
// distance constraint: (sigma_w2/sigma_b2) * sqrt(2 * trace_ratio4).
double covert_capacity_v(const GsvdDecomposition& gsvd, double sigma_b2,
                         double sigma_w2);

// Minimum key throughput supporting covert_capacity_v, clipped at zero:
// sqrt(2/trace_ratio4) * max(0, trace_ratio2 - (sigma_w2/sigma_b2) * trace_ratio4).
double key_throughput_v(const GsvdDecomposition& gsvd, double sigma_b2,
                        double sigma_w2);

// Message throughput in nats per sqrt(n * delta) under a relative-entropy
// constraint: (sigma_w2/sigma_b2) * sqrt(trace_ratio4).
double covert_capacity_d(const GsvdDecomposition& gsvd, double sigma_b2,
                         double sigma_w2);

// Throughput in nats per sqrt(n) at covertness level delta for each metric.
double throughput_v_at(const GsvdDecomposition& gsvd, double sigma_b2,
                       double sigma_w2, double delta);
double throughput_d_at(const GsvdDecomposition& gsvd, double sigma_b2,
                       double sigma_w2, double delta);

// Channel-independent throughput ratio between the variational-distance and
// relative-entropy formulations at matched covertness levels:
// throughput_v_at(sqrt(delta/2)) / throughput_d_at(delta)
//   = sqrt(2) * qinv((1 - sqrt(delta/2)) / 2) / sqrt(delta).
// Tends to sqrt(pi/2) as delta -> 0.
double metric_ratio(double delta);

struct CapacitySummary {
  double delta = 0.0;
  double c_covert_v = 0.0;  // nats per sqrt(n)*d
  double r_key_v = 0.0;     // nats per sqrt(n)*d
  double c_covert_d = 0.0;  // nats per sqrt(n*delta)
  double f_v = 0.0;         // nats per sqrt(n) at delta
  double f_d = 0.0;         // nats per sqrt(n) at delta
};

CapacitySummary capacity_summary(const GsvdDecomposition& gsvd, double sigma_b2,
                                 double sigma_w2, double delta);

struct MetricComparisonRow {
  double delta = 0.0;
  double f_d = 0.0;    // throughput_d_at(delta)
  double f_v = 0.0;    // throughput_v_at(sqrt(delta/2)), matched covertness
  double ratio = 0.0;  // f_v / f_d == metric_ratio(delta)
};

std::vector<MetricComparisonRow> throughput_curves(
    const GsvdDecomposition& gsvd, double sigma_b2, double sigma_w2,
    const std::vector<double>& delta_grid);

}  // namespace covert_mimo
