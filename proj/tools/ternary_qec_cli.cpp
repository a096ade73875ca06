// Command-line front end: lattice inspection, simulation, sweeps,
// calibration, dataset statistics and table rendering.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ternary_qec.hpp"

namespace {

using nlohmann::json;
using namespace tqec;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

/// Bad flag values or config contents; reported as a usage error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) throw IoError("cannot open '" + out + "' for writing");
  os << text;
  if (!os) throw IoError("failed writing '" + out + "'");
}

struct RunFlags {
  std::string config;
  std::optional<int> rings, tau;
  std::optional<double> p, f, alpha, theta;
  std::optional<std::uint64_t> trials, seed;
  std::string out;
  std::string format = "csv";
};

void add_run_flags(CLI::App* app, RunFlags& fl, bool with_format = true) {
  app->add_option("--config", fl.config, "JSON config: model fields, optional 'classifier' object, rings/tau/trials/seed");
  app->add_option("--rings", fl.rings, "Hexagonal rings (1..4 give 7/19/37/61 nodes)");
  app->add_option("--tau", fl.tau, "Detection window depth");
  app->add_option("--p", fl.p, "Physical error rate per node");
  app->add_option("--f", fl.f, "Ternary fraction");
  app->add_option("--alpha", fl.alpha, "Anti-bunching strength");
  app->add_option("--theta", fl.theta, "Classifier threshold");
  app->add_option("--trials", fl.trials, "Monte Carlo trials per condition");
  app->add_option("--seed", fl.seed, "Master seed");
  app->add_option("--out", fl.out, "Output file (stdout when omitted)");
  if (with_format) app->add_option("--format", fl.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

/// Config file first, then explicit flags on top.
RunConfig resolve_run_config(const RunFlags& fl, std::uint64_t default_trials = 100000) {
  RunConfig cfg;
  cfg.trials = default_trials;
  if (!fl.config.empty()) {
    json j = read_json_file(fl.config);
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    try {
      if (j.contains("classifier")) cfg.weights = j["classifier"].get<ClassifierWeights>();
      if (j.contains("rings")) cfg.rings = j["rings"].get<int>();
      if (j.contains("tau")) cfg.tau = j["tau"].get<int>();
      if (j.contains("trials")) cfg.trials = j["trials"].get<std::uint64_t>();
      if (j.contains("seed")) cfg.master_seed = j["seed"].get<std::uint64_t>();
      json model = json::object();
      for (const auto& [key, value] : j.items()) {
        if (key == "classifier" || key == "rings" || key == "tau" || key == "trials" || key == "seed") continue;
        model[key] = value;
      }
      cfg.model = model.get<ModelConfig>();
    } catch (const ArgumentError& e) {
      throw UsageError(fl.config + ": " + e.what());
    } catch (const json::exception& e) {
      throw UsageError(fl.config + ": " + e.what());
    }
  }
  if (fl.rings) cfg.rings = *fl.rings;
  if (fl.tau) cfg.tau = *fl.tau;
  if (fl.p) cfg.model.p = *fl.p;
  if (fl.f) cfg.model.f = *fl.f;
  if (fl.alpha) cfg.model.alpha = *fl.alpha;
  if (fl.theta) cfg.weights.theta = *fl.theta;
  if (fl.trials) cfg.trials = *fl.trials;
  if (fl.seed) cfg.master_seed = *fl.seed;
  try {
    cfg.validate();
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void print_seed(std::uint64_t seed) { std::cerr << "seed " << seed << '\n'; }

std::string render(const Table& t, const std::string& format) {
  return format == "json" ? to_json_rows(t).dump(2) + "\n" : to_csv(t);
}

// ------------------------------------------------------------------ stats

std::vector<std::string> split_ops(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<double> block_fanos(const SyndromeDataset& ds, std::size_t block) {
  const auto counts = ds.shot_counts();
  std::vector<double> out;
  for (std::size_t b = 0; b + block <= counts.size(); b += block) {
    std::vector<double> part(counts.begin() + static_cast<std::ptrdiff_t>(b),
                             counts.begin() + static_cast<std::ptrdiff_t>(b + block));
    try {
      out.push_back(stats::fano(part));
    } catch (const MeanZeroError&) {
    }
  }
  return out;
}

/// Normalised autocorrelation of the shot-averaged per-round activity,
/// truncated at its first non-positive lag.
// Correlation of per-round activation counts k rounds apart, pooled over
// shots; stops at the first non-positive lag.
std::pair<std::vector<double>, std::vector<double>> round_autocorrelation(const SyndromeDataset& ds) {
  std::vector<double> t{0.0}, y{1.0};
  const std::size_t max_lag = std::min<std::size_t>(ds.rounds > 2 ? ds.rounds - 2 : 0, 20);
  for (std::size_t k = 1; k <= max_lag; ++k) {
    std::vector<double> a, b;
    for (std::size_t s = 0; s < ds.shots; ++s)
      for (std::size_t r = 0; r + k < ds.rounds; ++r) {
        a.push_back(static_cast<double>(ds.round_count(s, r)));
        b.push_back(static_cast<double>(ds.round_count(s, r + k)));
      }
    double c = 0.0;
    try {
      c = stats::pearson(a, b);
    } catch (const std::exception&) {
      break;
    }
    if (!(c > 0.0)) break;
    t.push_back(static_cast<double>(k));
    y.push_back(c);
  }
  return {t, y};
}

json run_op(const std::string& op, const std::vector<SyndromeDataset>& sets, std::size_t block) {
  json per = json::array();
  if (op == "fano") {
    for (const auto& ds : sets) per.push_back(stats::fano(ds.shot_counts()));
    return per;
  }
  if (op == "anova") {
    std::vector<std::vector<double>> groups;
    for (const auto& ds : sets) groups.push_back(block_fanos(ds, block));
    const auto r = stats::anova_oneway(groups);
    return {{"f_stat", r.f_stat}, {"p", r.p}, {"df_between", r.df_between}, {"df_within", r.df_within},
            {"block", block}};
  }
  if (op == "burst") {
    std::vector<double> means, dists;
    for (const auto& ds : sets) {
      means.push_back(stats::mean(stats::burst_count(ds)));
      dists.push_back(ds.distance_or_rings);
    }
    json out{{"mean_bursts", means}, {"distance_or_rings", dists}};
    if (sets.size() >= 2) out["ratios"] = stats::burst_ratios(means);
    if (sets.size() >= 3) {
      const auto lin = stats::fit_polynomial(dists, means, 1);
      out["linear_fit"] = {{"coefficients", lin.coefficients}, {"r_squared", lin.r_squared}};
    }
    return out;
  }
  if (op == "dfa") {
    for (const auto& ds : sets) per.push_back(stats::dfa_hurst(ds.shot_counts()));
    return per;
  }
  if (op == "kww") {
    for (const auto& ds : sets) {
      const auto [t, y] = round_autocorrelation(ds);
      try {
        const auto fit = stats::kww_fit(t, y);
        per.push_back({{"amplitude", fit.amplitude}, {"tau_k", fit.tau_k}, {"alpha", fit.alpha_exp},
                       {"rmse", fit.rmse}, {"lags", t.size()}});
      } catch (const std::exception& e) {
        per.push_back({{"error", e.what()}, {"lags", t.size()}});
      }
    }
    return per;
  }
  if (op == "decompose") {
    for (const auto& ds : sets) {
      const auto d = stats::fano_decompose(ds);
      per.push_back({{"spatial_round1", d.spatial_round1},
                     {"spatial_bulk", d.spatial_bulk},
                     {"skipped_rounds", d.skipped_rounds},
                     {"aggregate_rounds", d.aggregate_rounds},
                     {"aggregate_fano", d.aggregate_fano},
                     {"aggregate_slope", d.aggregate_slope}});
    }
    return per;
  }
  if (op == "alpha-s") {
    for (const auto& ds : sets) {
      const double f = stats::fano(ds.shot_counts());
      const auto m = stats::alpha_s_map(f);
      json e{{"fano", f}, {"leading", m.leading}, {"ideal", m.ideal}, {"corrected", m.corrected},
             {"deviation_pct", m.deviation_pct}};
      if (ds.adjacency) {
        const auto c = stats::adjacent_correlation(ds);
        e["adjacent_corr"] = c.mean_corr;
        e["crosscheck_fano"] = stats::fano_crosscheck(c.mean_corr);
      }
      per.push_back(e);
    }
    return per;
  }
  if (op == "corr") {
    for (const auto& ds : sets) {
      const auto c = stats::adjacent_correlation(ds);
      per.push_back({{"mean_corr", c.mean_corr}, {"fraction_positive", c.fraction_positive},
                     {"pairs_used", c.pairs_used}, {"pairs_skipped", c.pairs_skipped}});
    }
    return per;
  }
  if (op == "lag") {
    for (const auto& ds : sets) per.push_back(stats::lag_autocorr(ds.shot_counts(), 1));
    return per;
  }
  throw UsageError("unknown stats op '" + op + "'");
}

// ------------------------------------------------------------- calibrate

void read_axis(const json& g, const char* key, std::vector<double>& dst) {
  if (!g.contains(key)) return;
  dst = g[key].get<std::vector<double>>();
}

CalibrationGrid grid_from_json(const json& g) {
  static const std::vector<std::string> keys{"a_b", "a_t", "leak_c", "q_false", "s_fidelity", "alpha",
                                             "refine_levels"};
  for (const auto& [key, value] : g.items())
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw UsageError("unknown grid key '" + key + "'");
  CalibrationGrid grid;
  read_axis(g, "a_b", grid.a_b);
  read_axis(g, "a_t", grid.a_t);
  read_axis(g, "leak_c", grid.leak_c);
  read_axis(g, "q_false", grid.q_false);
  read_axis(g, "s_fidelity", grid.s_fidelity);
  read_axis(g, "alpha", grid.alpha);
  if (g.contains("refine_levels")) grid.refine_levels = g["refine_levels"].get<int>();
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed binary/ternary error-model simulator and syndrome statistics toolkit", "tqec"};
  app.require_subcommand(1);

  int lattice_rings = 1;
  std::string lattice_out;
  auto* lattice = app.add_subcommand("lattice", "Dump a hexagonal cell as JSON");
  lattice->add_option("--rings", lattice_rings, "Number of rings")->required();
  lattice->add_option("--out", lattice_out, "Output file (stdout when omitted)");

  RunFlags sim_fl;
  std::string sim_dataset;
  auto* simulate = app.add_subcommand("simulate", "Run one paired decoder comparison");
  add_run_flags(simulate, sim_fl);
  simulate->add_option("--dataset", sim_dataset, "Also write the sampled windows as a JSONL syndrome dataset");

  RunFlags sweep_fl;
  int sweep_table = 2;
  auto* sweep = app.add_subcommand("sweep", "Reproduce Table II (cell size x depth) or Table III (ternary fraction)");
  add_run_flags(sweep, sweep_fl);
  sweep->add_option("--table", sweep_table, "Table number")->required()->check(CLI::IsMember({2, 3}));

  RunFlags cal_fl;
  std::string cal_targets;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Fit activation parameters to standard-decoder LER targets");
  add_run_flags(calibrate_cmd, cal_fl, false);
  calibrate_cmd->add_option("--targets", cal_targets, "Targets JSON (std_ler, fano, optional grid)")->required();

  std::vector<std::string> stats_in;
  std::string stats_ops = "fano,anova,burst,dfa,kww,decompose,alpha-s";
  std::string stats_out;
  std::size_t stats_block = 100;
  auto* stats_cmd = app.add_subcommand("stats", "Syndrome statistics on JSONL datasets");
  stats_cmd->add_option("--in", stats_in, "Dataset file(s); cross-dataset ops use one group per file")->required();
  stats_cmd->add_option("--ops", stats_ops,
                        "Comma-separated: fano,anova,burst,dfa,kww,decompose,alpha-s,corr,lag");
  stats_cmd->add_option("--block", stats_block, "Shots per Fano block for anova")->check(CLI::PositiveNumber);
  stats_cmd->add_option("--out", stats_out, "Report file (stdout when omitted)");

  std::string report_in, report_out;
  auto* report = app.add_subcommand("report", "Render a stored sweep CSV as an aligned text table");
  report->add_option("--in", report_in, "CSV written by 'sweep'")->required();
  report->add_option("--out", report_out, "Output file (stdout when omitted)");

  if (argc < 2) {
    std::cerr << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kExitUsage;
  }

  try {
    if (lattice->parsed()) {
      print_seed(RunConfig{}.master_seed);
      emit(to_json(build_cell(lattice_rings)).dump(2) + "\n", lattice_out);
    } else if (simulate->parsed()) {
      const RunConfig cfg = resolve_run_config(sim_fl);
      print_seed(cfg.master_seed);
      const RunSummary s = run_condition(cfg);
      emit(sim_fl.format == "json" ? to_json(s).dump(2) + "\n" : to_csv(table2({s})), sim_fl.out);
      if (!sim_dataset.empty())
        write_dataset(simulate_dataset(build_cell(cfg.rings), cfg.model, cfg.tau, cfg.trials, cfg.master_seed),
                      sim_dataset);
    } else if (sweep->parsed()) {
      RunConfig cfg = resolve_run_config(sweep_fl);
      print_seed(cfg.master_seed);
      if (sweep_table == 2) {
        emit(render(table2(sweep_primary(cfg)), sweep_fl.format), sweep_fl.out);
      } else {
        if (!sweep_fl.rings && sweep_fl.config.empty()) cfg.rings = 2;
        if (!sweep_fl.tau && sweep_fl.config.empty()) cfg.tau = 1;
        emit(render(table3(sweep_sensitivity(cfg, table3_f_values())), sweep_fl.format), sweep_fl.out);
      }
    } else if (calibrate_cmd->parsed()) {
      const RunConfig cfg = resolve_run_config(cal_fl, 20000);
      print_seed(cfg.master_seed);
      const json tj = read_json_file(cal_targets);
      CalibrationTargets targets;
      CalibrationGrid grid;
      try {
        if (tj.contains("std_ler")) {
          const auto v = tj["std_ler"].get<std::vector<double>>();
          if (v.size() != 4) throw UsageError("std_ler needs 4 values (rings 1..4, tau 1)");
          std::copy(v.begin(), v.end(), targets.std_ler.begin());
        }
        if (tj.contains("fano")) targets.fano = tj["fano"].get<double>();
        if (tj.contains("fano_tolerance")) targets.fano_tolerance = tj["fano_tolerance"].get<double>();
        if (tj.contains("grid")) grid = grid_from_json(tj["grid"]);
      } catch (const json::exception& e) {
        throw UsageError(cal_targets + ": " + e.what());
      }
      const CalibrationResult r = calibrate(targets, grid, cfg);
      json model = r.model;
      model["classifier"] = cfg.weights;
      emit(model.dump(2) + "\n", cal_fl.out);
      const json diag{{"objective", r.objective},
                      {"simulated_std_ler", r.simulated_std_ler},
                      {"target_std_ler", targets.std_ler},
                      {"edge_coupling", r.edge_coupling},
                      {"fixture_fano", r.fixture_fano},
                      {"fano_in_band", r.fano_in_band},
                      {"model_syndrome_fano", r.model_syndrome_fano},
                      {"evaluations", r.evaluations},
                      {"trials", cfg.trials}};
      (cal_fl.out.empty() ? std::cerr : std::cout) << diag.dump(2) << '\n';
    } else if (stats_cmd->parsed()) {
      print_seed(RunConfig{}.master_seed);
      std::vector<SyndromeDataset> sets;
      for (const auto& path : stats_in) sets.push_back(read_dataset(path));
      json rep = json::object();
      rep["inputs"] = stats_in;
      bool failed = false;
      for (const auto& op : split_ops(stats_ops)) {
        try {
          rep[op] = run_op(op, sets, stats_block);
        } catch (const UsageError&) {
          throw;
        } catch (const std::exception& e) {
          rep[op] = {{"error", e.what()}};
          failed = true;
        }
      }
      emit(rep.dump(2) + "\n", stats_out);
      if (failed) return kExitRuntime;
    } else if (report->parsed()) {
      print_seed(RunConfig{}.master_seed);
      emit(render_aligned(parse_csv(read_file(report_in))), report_out);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
