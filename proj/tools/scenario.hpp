#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "covert_mimo/channel_model.hpp"

namespace covert_mimo::cli {

// One experiment description. The channel is given either as explicit
// matrices (H_b, H_w) or as per-subchannel gains (lambda_b plus lambda_w or
// a uniform bound lambda_0). Keys not listed here are rejected.
struct ScenarioConfig {
  std::optional<Eigen::MatrixXd> h_b;
  std::optional<Eigen::MatrixXd> h_w;
  std::optional<Eigen::VectorXd> lambda_b;
  std::optional<Eigen::VectorXd> lambda_w;
  std::optional<double> lambda_0;

  double sigma_b2 = 0.0;
  double sigma_w2 = 0.0;
  double delta = 0.2;
  std::int64_t n = 400;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  double xi = 0.5;
  double c_margin = 1.0;  // key "C"
  double b0 = 0.0;
  double b1 = 0.0;
  double rank_rtol = kDefaultRankRtol;
  std::int64_t m_words = 64;  // key "M"
  std::int64_t k_keys = 4;    // key "K"

  bool has_matrices() const { return h_b.has_value() && h_w.has_value(); }
  bool has_gains() const {
    return lambda_b.has_value() &&
           (lambda_w.has_value() || lambda_0.has_value());
  }
};

// Parses and validates a JSON scenario file. Malformed JSON or malformed
// matrices raise ParseError (with a line/row); missing or out-of-range fields
// raise ValidationError naming the field.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text);

// Builds the decomposition the scenario describes: decompose_gsvd for
// matrices, the explicit-gain coordinate system otherwise.
GsvdDecomposition resolve_channel(const ScenarioConfig& config);

}  // namespace covert_mimo::cli
