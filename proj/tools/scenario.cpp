#include "scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "covert_mimo/errors.hpp"

namespace covert_mimo::cli {
namespace {

using nlohmann::json;

std::int64_t line_of_byte(const std::string& text, std::size_t byte) {
  std::int64_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

double number_field(const json& j, const std::string& key) {
  if (!j.at(key).is_number()) {
    throw ValidationError(key, "scenario: field '" + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

Eigen::VectorXd vector_field(const json& j, const std::string& key) {
  const json& arr = j.at(key);
  if (!arr.is_array() || arr.empty()) {
    throw ValidationError(key, "scenario: field '" + key +
                                   "' must be a non-empty array of numbers");
  }
  Eigen::VectorXd out(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      throw ValidationError(key, "scenario: field '" + key +
                                     "' must contain only numbers");
    }
    out(Eigen::Index(i)) = arr[i].get<double>();
  }
  return out;
}

Eigen::MatrixXd matrix_field(const json& j, const std::string& key) {
  const json& rows = j.at(key);
  if (!rows.is_array() || rows.empty() || !rows[0].is_array() ||
      rows[0].empty()) {
    throw ValidationError(key, "scenario: field '" + key +
                                   "' must be an array of row arrays");
  }
  const std::size_t cols = rows[0].size();
  Eigen::MatrixXd out(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != cols) {
      throw ParseError(std::int64_t(r + 1),
                       "scenario: matrix '" + key + "' row " +
                           std::to_string(r + 1) + " has length " +
                           std::to_string(rows[r].size()) + ", expected " +
                           std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!rows[r][c].is_number()) {
        throw ValidationError(key, "scenario: matrix '" + key +
                                       "' must contain only numbers");
      }
      out(Eigen::Index(r), Eigen::Index(c)) = rows[r][c].get<double>();
    }
  }
  return out;
}

const std::set<std::string> kKnownKeys = {
    "H_b",  "H_w",  "lambda_b", "lambda_w", "lambda_0", "sigma_b2",
    "sigma_w2", "delta", "n", "seed", "trials", "xi", "C", "B0", "B1",
    "rank_rtol", "M", "K"};

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line_of_byte(text, e.byte),
                     "scenario: JSON parse failure near line " +
                         std::to_string(line_of_byte(text, e.byte)) + ": " +
                         e.what());
  }
  if (!j.is_object()) {
    throw ParseError(1, "scenario: top level must be a JSON object");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (kKnownKeys.find(it.key()) == kKnownKeys.end()) {
      throw ValidationError(it.key(),
                            "scenario: unknown field '" + it.key() + "'");
    }
  }

  ScenarioConfig cfg;
  if (j.contains("H_b")) cfg.h_b = matrix_field(j, "H_b");
  if (j.contains("H_w")) cfg.h_w = matrix_field(j, "H_w");
  if (j.contains("lambda_b")) cfg.lambda_b = vector_field(j, "lambda_b");
  if (j.contains("lambda_w")) cfg.lambda_w = vector_field(j, "lambda_w");
  if (j.contains("lambda_0")) cfg.lambda_0 = number_field(j, "lambda_0");

  if (!j.contains("sigma_b2")) {
    throw ValidationError("sigma_b2", "scenario: required field 'sigma_b2' missing");
  }
  if (!j.contains("sigma_w2")) {
    throw ValidationError("sigma_w2", "scenario: required field 'sigma_w2' missing");
  }
  cfg.sigma_b2 = number_field(j, "sigma_b2");
  cfg.sigma_w2 = number_field(j, "sigma_w2");
  if (j.contains("delta")) cfg.delta = number_field(j, "delta");
  if (j.contains("n")) cfg.n = std::int64_t(number_field(j, "n"));
  if (j.contains("seed")) cfg.seed = std::uint64_t(number_field(j, "seed"));
  if (j.contains("trials")) cfg.trials = std::uint64_t(number_field(j, "trials"));
  if (j.contains("xi")) cfg.xi = number_field(j, "xi");
  if (j.contains("C")) cfg.c_margin = number_field(j, "C");
  if (j.contains("B0")) cfg.b0 = number_field(j, "B0");
  if (j.contains("B1")) cfg.b1 = number_field(j, "B1");
  if (j.contains("rank_rtol")) cfg.rank_rtol = number_field(j, "rank_rtol");
  if (j.contains("M")) cfg.m_words = std::int64_t(number_field(j, "M"));
  if (j.contains("K")) cfg.k_keys = std::int64_t(number_field(j, "K"));

  if (!(cfg.sigma_b2 > 0.0)) {
    throw ValidationError("sigma_b2", "scenario: 'sigma_b2' must be positive");
  }
  if (!(cfg.sigma_w2 > 0.0)) {
    throw ValidationError("sigma_w2", "scenario: 'sigma_w2' must be positive");
  }
  if (!(cfg.delta > 0.0) || !(cfg.delta < 1.0)) {
    throw ValidationError("delta", "scenario: 'delta' must lie in (0, 1)");
  }
  if (cfg.n < 1) throw ValidationError("n", "scenario: 'n' must be >= 1");
  if (cfg.trials < 1) {
    throw ValidationError("trials", "scenario: 'trials' must be >= 1");
  }
  if (!(cfg.xi > 0.0) || !(cfg.xi < 1.0)) {
    throw ValidationError("xi", "scenario: 'xi' must lie in (0, 1)");
  }
  if (!(cfg.c_margin >= 0.0)) {
    throw ValidationError("C", "scenario: 'C' must be non-negative");
  }
  if (!(cfg.rank_rtol > 0.0)) {
    throw ValidationError("rank_rtol", "scenario: 'rank_rtol' must be positive");
  }
  if (cfg.m_words < 1) throw ValidationError("M", "scenario: 'M' must be >= 1");
  if (cfg.k_keys < 1) throw ValidationError("K", "scenario: 'K' must be >= 1");
  if (cfg.lambda_0.has_value() && !(*cfg.lambda_0 > 0.0)) {
    throw ValidationError("lambda_0", "scenario: 'lambda_0' must be positive");
  }
  if (cfg.h_b.has_value() != cfg.h_w.has_value()) {
    throw ValidationError(cfg.h_b.has_value() ? "H_w" : "H_b",
                          "scenario: matrices 'H_b' and 'H_w' must be given together");
  }
  if (!cfg.has_matrices() && !cfg.has_gains()) {
    throw ValidationError(
        "H_b",
        "scenario: provide either matrices 'H_b'/'H_w' or gains 'lambda_b' "
        "with 'lambda_w' or 'lambda_0'");
  }
  if (cfg.lambda_b.has_value() && cfg.lambda_w.has_value() &&
      cfg.lambda_b->size() != cfg.lambda_w->size()) {
    throw ValidationError("lambda_w",
                          "scenario: 'lambda_b' and 'lambda_w' lengths differ");
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("config", "scenario: cannot open file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

GsvdDecomposition resolve_channel(const ScenarioConfig& config) {
  if (config.has_matrices()) {
    ChannelPair pair{*config.h_b, *config.h_w, config.sigma_b2, config.sigma_w2};
    return decompose_gsvd(pair, config.rank_rtol);
  }
  Eigen::VectorXd lw;
  if (config.lambda_w.has_value()) {
    lw = *config.lambda_w;
  } else {
    lw = Eigen::VectorXd::Constant(config.lambda_b->size(), *config.lambda_0);
  }
  return GsvdDecomposition::from_gains(*config.lambda_b, lw);
}

}  // namespace covert_mimo::cli
