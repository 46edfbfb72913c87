#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "covert_mimo/allocation.hpp"
#include "covert_mimo/capacity.hpp"
#include "covert_mimo/compound.hpp"
#include "covert_mimo/covert_code.hpp"
#include "covert_mimo/covertness.hpp"
#include "covert_mimo/detector.hpp"
#include "covert_mimo/errors.hpp"
#include "covert_mimo/rng.hpp"
#include "report.hpp"
#include "scenario.hpp"

namespace covert_mimo::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kLn2 = 0.6931471805599453;

struct CommonOpts {
  std::string config_path;
  std::string format = "csv";
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("config", opts.config_path, "Scenario JSON file")->required();
  sub->add_option("--format", opts.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--output", opts.output, "Write the report to a file");
  sub->add_option("--seed", opts.seed, "Override the scenario seed");
  sub->add_option("--trials", opts.trials, "Override the scenario trial count");
}

ScenarioConfig load_with_overrides(const CommonOpts& opts) {
  ScenarioConfig cfg = load_scenario(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.trials) cfg.trials = *opts.trials;
  return cfg;
}

void emit(const CommonOpts& opts, const std::string& text) {
  if (opts.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) {
    throw ValidationError("output",
                          "cannot open output file '" + opts.output + "'");
  }
  out << text;
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

Constellation scenario_constellation(const ScenarioConfig& cfg,
                                     const GsvdDecomposition& gsvd) {
  AllocationResult alloc = solve_allocation_v(gsvd, cfg.sigma_b2, cfg.sigma_w2);
  return build_constellation(alloc, gsvd, cfg.n, cfg.delta);
}

// Every word of a binary antipodal code has the same received power at the
// intended receiver; this is the detector's anticipated P*.
double anticipated_power(const GsvdDecomposition& gsvd,
                         const Constellation& cst) {
  return double(cst.n) *
         (gsvd.lambda_b.array().square() * cst.rho.array()).sum();
}

int cmd_gsvd(const CommonOpts& opts) {
  ScenarioConfig cfg = load_with_overrides(opts);
  if (!cfg.has_matrices()) {
    throw ValidationError("H_b", "gsvd: requires explicit matrices H_b and H_w");
  }
  ChannelPair pair{*cfg.h_b, *cfg.h_w, cfg.sigma_b2, cfg.sigma_w2};
  SubspaceReport sub = classify_subspaces(pair, cfg.rank_rtol);
  GsvdDecomposition gsvd;
  try {
    gsvd = decompose_gsvd(pair, cfg.rank_rtol);
  } catch (const RankDeficient&) {
    std::cerr << "subspace report: m=" << sub.m << " p=" << sub.p
              << " q=" << sub.q << " dim_s_w=" << sub.dim_s_w
              << " dim_s_n=" << sub.dim_s_n << " square_root_law_holds="
              << (sub.square_root_law_holds ? 1 : 0) << "\n";
    throw;
  }

  if (opts.format == "csv") {
    std::ostringstream out;
    out << "j,lambda_b,lambda_w\n";
    for (Eigen::Index j = 0; j < gsvd.subchannels(); ++j) {
      out << j << "," << fmt_g(gsvd.lambda_b(j)) << ","
          << fmt_g(gsvd.lambda_w(j)) << "\n";
    }
    emit(opts, out.str());
  } else {
    ordered_json j;
    j["lambda_b"] = std::vector<double>(gsvd.lambda_b.data(),
                                        gsvd.lambda_b.data() + gsvd.subchannels());
    j["lambda_w"] = std::vector<double>(gsvd.lambda_w.data(),
                                        gsvd.lambda_w.data() + gsvd.subchannels());
    j["subspaces"] = {{"m", sub.m},
                      {"p", sub.p},
                      {"q", sub.q},
                      {"dim_s_w", sub.dim_s_w},
                      {"dim_s_n", sub.dim_s_n},
                      {"square_root_law_holds", sub.square_root_law_holds}};
    emit(opts, dump_json(j));
  }
  return 0;
}

int cmd_capacity(const CommonOpts& opts, bool bits) {
  ScenarioConfig cfg = load_with_overrides(opts);
  GsvdDecomposition gsvd = resolve_channel(cfg);
  CapacitySummary s = capacity_summary(gsvd, cfg.sigma_b2, cfg.sigma_w2, cfg.delta);
  double unit = bits ? 1.0 / kLn2 : 1.0;

  if (opts.format == "csv") {
    std::ostringstream out;
    out << "delta,c_covert_v,r_key_v,c_covert_d,f_v,f_d\n"
        << fmt_g(s.delta) << "," << fmt_g(s.c_covert_v * unit) << ","
        << fmt_g(s.r_key_v * unit) << "," << fmt_g(s.c_covert_d * unit) << ","
        << fmt_g(s.f_v * unit) << "," << fmt_g(s.f_d * unit) << "\n";
    emit(opts, out.str());
  } else {
    ordered_json j;
    j["delta"] = s.delta;
    j["unit"] = bits ? "bits" : "nats";
    j["c_covert_v"] = s.c_covert_v * unit;
    j["r_key_v"] = s.r_key_v * unit;
    j["c_covert_d"] = s.c_covert_d * unit;
    j["f_v"] = s.f_v * unit;
    j["f_d"] = s.f_d * unit;
    emit(opts, dump_json(j));
  }
  return 0;
}

int cmd_allocate(const CommonOpts& opts, const std::string& metric) {
  ScenarioConfig cfg = load_with_overrides(opts);
  GsvdDecomposition gsvd = resolve_channel(cfg);
  AllocationResult alloc = metric == "d"
                               ? solve_allocation_d(gsvd, cfg.sigma_b2, cfg.sigma_w2)
                               : solve_allocation_v(gsvd, cfg.sigma_b2, cfg.sigma_w2);
  double constraint = covariance_constraint(gsvd, cfg.sigma_w2, alloc.t);
  FeasibilityReport feas = perturbed_feasibility(alloc, gsvd, cfg.sigma_w2,
                                                 cfg.n, cfg.delta, cfg.c_margin);
  Constellation cst = build_constellation(alloc, gsvd, cfg.n, cfg.delta);

  if (opts.format == "csv") {
    std::ostringstream out;
    out << "key,value\n";
    out << "metric," << metric << "\n";
    out << "mu," << fmt_g(alloc.mu) << "\n";
    out << "objective," << fmt_g(alloc.objective) << "\n";
    out << "constraint," << fmt_g(constraint) << "\n";
    out << "budget," << fmt_g(feas.budget) << "\n";
    out << "margin," << fmt_g(feas.margin) << "\n";
    out << "feasible," << (feas.feasible ? 1 : 0) << "\n";
    out << "shrink," << fmt_g(feas.shrink) << "\n";
    out << "\nj,t,rho,amplitude\n";
    for (Eigen::Index j = 0; j < alloc.t.size(); ++j) {
      out << j << "," << fmt_g(alloc.t(j)) << "," << fmt_g(cst.rho(j)) << ","
          << fmt_g(cst.amplitude(j)) << "\n";
    }
    emit(opts, out.str());
  } else {
    ordered_json j;
    j["metric"] = metric;
    j["mu"] = alloc.mu;
    j["objective"] = alloc.objective;
    j["constraint"] = constraint;
    j["budget"] = feas.budget;
    j["margin"] = feas.margin;
    j["feasible"] = feas.feasible;
    j["shrink"] = feas.shrink;
    j["t"] = std::vector<double>(alloc.t.data(), alloc.t.data() + alloc.t.size());
    j["rho"] = std::vector<double>(cst.rho.data(), cst.rho.data() + cst.rho.size());
    j["amplitude"] = std::vector<double>(cst.amplitude.data(),
                                         cst.amplitude.data() + cst.amplitude.size());
    std::vector<std::vector<double>> qn;
    for (Eigen::Index r = 0; r < cst.q_n.rows(); ++r) {
      qn.emplace_back(cst.q_n.row(r).begin(), cst.q_n.row(r).end());
    }
    j["q_n"] = qn;
    emit(opts, dump_json(j));
  }
  return 0;
}

int cmd_detector(const CommonOpts& opts) {
  ScenarioConfig cfg = load_with_overrides(opts);
  GsvdDecomposition gsvd = resolve_channel(cfg);
  Constellation cst = scenario_constellation(cfg, gsvd);
  Codebook code = generate_codebook(cst, cfg.m_words, cfg.k_keys, cfg.seed);
  double p_star = anticipated_power(gsvd, cst);
  DetectorReport rep = run_detector_mc(&code, gsvd, p_star, cfg.n, cfg.sigma_w2,
                                       cfg.trials, cfg.seed, cfg.b0, cfg.b1);

  if (opts.format == "csv") {
    std::ostringstream out;
    out << "n,trials,alpha_mc,beta_mc,alpha_bound,beta_bound,half_width\n"
        << rep.n << "," << rep.trials << "," << fmt_g(rep.alpha_mc) << ","
        << fmt_g(rep.beta_mc) << "," << fmt_g(rep.alpha_bound) << ","
        << fmt_g(rep.beta_bound) << "," << fmt_g(rep.half_width) << "\n";
    emit(opts, out.str());
  } else {
    ordered_json j;
    j["n"] = rep.n;
    j["trials"] = rep.trials;
    j["p_star"] = p_star;
    j["alpha_mc"] = rep.alpha_mc;
    j["beta_mc"] = rep.beta_mc;
    j["alpha_bound"] = rep.alpha_bound;
    j["beta_bound"] = rep.beta_bound;
    j["half_width"] = rep.half_width;
    emit(opts, dump_json(j));
  }
  return 0;
}

int cmd_covertness(const CommonOpts& opts, bool use_code) {
  ScenarioConfig cfg = load_with_overrides(opts);
  GsvdDecomposition gsvd = resolve_channel(cfg);
  Constellation cst = scenario_constellation(cfg, gsvd);
  double v_closed = product_form_v(gsvd, cst, cfg.sigma_w2);
  double kl = kl_per_letter(cst, gsvd, cfg.sigma_w2);

  CovertnessEstimate est;
  if (use_code) {
    Codebook code = generate_codebook(cst, cfg.m_words, cfg.k_keys, cfg.seed);
    est = v_codebook_mc(code, gsvd, cfg.sigma_w2, cfg.trials, cfg.seed);
  } else {
    est = v_product_mc(cst, gsvd, cfg.sigma_w2, cfg.trials, cfg.seed);
  }

  if (opts.format == "csv") {
    std::ostringstream out;
    out << "n,delta,v_closed,v_mc,half_width,kl_per_letter\n"
        << cfg.n << "," << fmt_g(cfg.delta) << "," << fmt_g(v_closed) << ","
        << fmt_g(est.value) << "," << fmt_g(est.half_width) << "," << fmt_g(kl)
        << "\n";
    emit(opts, out.str());
  } else {
    ordered_json j;
    j["n"] = cfg.n;
    j["delta"] = cfg.delta;
    j["v_closed"] = v_closed;
    j["estimator"] = use_code ? "codebook" : "product";
    j["v_mc"] = est.value;
    j["half_width"] = est.half_width;
    j["trials"] = est.trials;
    j["kl_per_letter"] = kl;
    emit(opts, dump_json(j));
  }
  return 0;
}

int cmd_reliability(const CommonOpts& opts) {
  ScenarioConfig cfg = load_with_overrides(opts);
  GsvdDecomposition gsvd = resolve_channel(cfg);
  AllocationResult alloc = solve_allocation_v(gsvd, cfg.sigma_b2, cfg.sigma_w2);
  Constellation cst = build_constellation(alloc, gsvd, cfg.n, cfg.delta);
  CodeSizing sizing = size_code(gsvd, alloc, cfg.sigma_b2, cfg.sigma_w2, cfg.n,
                                cfg.delta, cfg.xi);
  std::int64_t m_used = word_count(sizing.log_m, cfg.m_words);
  Codebook code = generate_codebook(cst, m_used, cfg.k_keys, cfg.seed);
  ReliabilityReport rep =
      simulate_reliability(code, gsvd, cfg.sigma_b2, cfg.trials, cfg.seed);

  if (opts.format == "csv") {
    std::ostringstream out;
    out << "n,trials,m_words,k_keys,error_rate,half_width\n"
        << rep.n << "," << rep.trials << "," << m_used << "," << cfg.k_keys
        << "," << fmt_g(rep.error_rate) << "," << fmt_g(rep.half_width) << "\n";
    emit(opts, out.str());
  } else {
    ordered_json j;
    j["n"] = rep.n;
    j["trials"] = rep.trials;
    j["m_words"] = m_used;
    j["k_keys"] = cfg.k_keys;
    j["log_m"] = sizing.log_m;
    j["log_mk"] = sizing.log_mk;
    j["error_rate"] = rep.error_rate;
    j["half_width"] = rep.half_width;
    emit(opts, dump_json(j));
  }
  return 0;
}

int cmd_compound(const CommonOpts& opts) {
  ScenarioConfig cfg = load_with_overrides(opts);
  if (!cfg.lambda_b.has_value()) {
    throw ValidationError("lambda_b",
                          "compound: requires explicit gains 'lambda_b'");
  }
  if (!cfg.lambda_0.has_value()) {
    throw ValidationError("lambda_0", "compound: requires 'lambda_0'");
  }
  UncertaintySet set{GsvdDecomposition::from_gains(
                         *cfg.lambda_b, Eigen::VectorXd::Constant(
                                            cfg.lambda_b->size(), *cfg.lambda_0)),
                     *cfg.lambda_0};
  CompoundCapacity cap = compound_capacity(set, cfg.sigma_b2, cfg.sigma_w2);

  if (opts.format == "csv") {
    std::ostringstream out;
    out << "lambda0,c_covert,log_mk_rate\n"
        << fmt_g(set.lambda_0) << "," << fmt_g(cap.c_covert) << ","
        << fmt_g(cap.log_mk_rate) << "\n";
    emit(opts, out.str());
  } else {
    ordered_json j;
    j["lambda0"] = set.lambda_0;
    j["c_covert"] = cap.c_covert;
    j["log_mk_rate"] = cap.log_mk_rate;
    emit(opts, dump_json(j));
  }
  return 0;
}

int cmd_compare_metrics(const CommonOpts& opts, double delta_min,
                        double delta_max, int points) {
  ScenarioConfig cfg = load_with_overrides(opts);
  GsvdDecomposition gsvd = resolve_channel(cfg);
  if (!(delta_min > 0.0) || !(delta_max < 1.0) || !(delta_min <= delta_max)) {
    throw ValidationError("delta",
                          "compare-metrics: need 0 < delta-min <= delta-max < 1");
  }
  if (points < 1) {
    throw ValidationError("points", "compare-metrics: points must be >= 1");
  }

  std::vector<double> grid;
  grid.reserve(std::size_t(points));
  if (points == 1) {
    grid.push_back(delta_min);
  } else {
    double step = (delta_max - delta_min) / double(points - 1);
    for (int i = 0; i < points; ++i) grid.push_back(delta_min + step * i);
  }
  auto rows = throughput_curves(gsvd, cfg.sigma_b2, cfg.sigma_w2, grid);

  if (opts.format == "csv") {
    std::ostringstream out;
    out << "delta,f_d,f_v,ratio\n";
    for (const auto& row : rows) {
      out << fmt_g(row.delta) << "," << fmt_g(row.f_d) << "," << fmt_g(row.f_v)
          << "," << fmt_g(row.ratio) << "\n";
    }
    emit(opts, out.str());
  } else {
    ordered_json j = ordered_json::array();
    for (const auto& row : rows) {
      j.push_back({{"delta", row.delta},
                   {"f_d", row.f_d},
                   {"f_v", row.f_v},
                   {"ratio", row.ratio}});
    }
    emit(opts, dump_json(j));
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Covert throughput analysis for two-receiver Gaussian channels"};
  app.require_subcommand(1);
  app.footer(
      "Scenario JSON keys: H_b/H_w (row arrays) or lambda_b with lambda_w or\n"
      "lambda_0; sigma_b2, sigma_w2 (required). Defaults: delta=0.2, n=400,\n"
      "trials=10000, seed=1, xi=0.5, C=1, B0=B1=0, M=64, K=4, rank_rtol=1e-10.");

  CommonOpts gsvd_opts;
  add_common(app.add_subcommand("gsvd", "Joint channel decomposition and subspace report"),
             gsvd_opts);

  CommonOpts capacity_opts;
  bool bits = false;
  auto* capacity_sub =
      app.add_subcommand("capacity", "Covert throughput summary at the scenario delta");
  add_common(capacity_sub, capacity_opts);
  capacity_sub->add_flag("--bits", bits, "Report in bits instead of nats");

  CommonOpts allocate_opts;
  std::string metric = "v";
  auto* allocate_sub =
      app.add_subcommand("allocate", "Optimal sub-channel power profile and constellation");
  add_common(allocate_sub, allocate_opts);
  allocate_sub->add_option("--metric", metric, "Covertness metric (v or d)")
      ->check(CLI::IsMember({"v", "d"}))
      ->capture_default_str();

  CommonOpts detector_opts;
  add_common(app.add_subcommand("detector",
                                "Adversary radiometer error rates against a generated code"),
             detector_opts);

  CommonOpts covertness_opts;
  bool use_code = false;
  auto* covertness_sub = app.add_subcommand(
      "covertness", "Closed-form and Monte Carlo variational distance");
  add_common(covertness_sub, covertness_opts);
  covertness_sub->add_flag("--code", use_code,
                           "Estimate against the exact finite-code mixture");

  CommonOpts reliability_opts;
  add_common(app.add_subcommand("reliability",
                                "Decoding error rate of a sized random code"),
             reliability_opts);

  CommonOpts compound_opts;
  add_common(app.add_subcommand("compound",
                                "Worst-case throughput under adversary gain uncertainty"),
             compound_opts);

  CommonOpts compare_opts;
  double delta_min = 0.01, delta_max = 0.9;
  int points = 90;
  auto* compare_sub = app.add_subcommand(
      "compare-metrics", "Matched-covertness throughput ratio across delta");
  add_common(compare_sub, compare_opts);
  compare_sub->add_option("--delta-min", delta_min)->capture_default_str();
  compare_sub->add_option("--delta-max", delta_max)->capture_default_str();
  compare_sub->add_option("--points", points)->capture_default_str();

  try {
    app.parse(argc, argv);
    if (app.got_subcommand("gsvd")) return cmd_gsvd(gsvd_opts);
    if (app.got_subcommand("capacity")) return cmd_capacity(capacity_opts, bits);
    if (app.got_subcommand("allocate")) return cmd_allocate(allocate_opts, metric);
    if (app.got_subcommand("detector")) return cmd_detector(detector_opts);
    if (app.got_subcommand("covertness"))
      return cmd_covertness(covertness_opts, use_code);
    if (app.got_subcommand("reliability")) return cmd_reliability(reliability_opts);
    if (app.got_subcommand("compound")) return cmd_compound(compound_opts);
    if (app.got_subcommand("compare-metrics"))
      return cmd_compare_metrics(compare_opts, delta_min, delta_max, points);
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.category() == ErrorCategory::numerical ? 2 : 1;
  }
}

}  // namespace covert_mimo::cli
