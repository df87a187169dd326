#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "ermstab/bounds.hpp"
#include "ermstab/cli.hpp"
#include "ermstab/errors.hpp"

namespace ermstab::cli {

using nlohmann::json;

RunOutput run_experiment(const ExperimentConfig& config) {
  validate(config);
  RunOutput out{resolve_scenario(config.scenario), {}, {}, {}};
  const ScenarioSpec& spec = out.scenario;

  ExactOptions exact;
  exact.arithmetic = config.arithmetic;
  exact.cap = config.cap;
  McConfig mc;
  mc.trials = config.trials;
  mc.master_seed = config.seed;
  mc.workers = config.workers;
  mc.notion = config.notion;
  mc.beta = config.beta;
  mc.i_policy = config.i_policy;

  for (std::size_t m : config.grid) {
    SeriesRow row;
    row.scenario = spec.name;
    row.notion = std::string(to_string(config.notion));
    row.beta = to_string(config.beta);
    row.m = m;
    bool use_exact = config.engine == Engine::Exact;
    if (config.engine == Engine::Auto) {
      use_exact = enumeration_size(spec, m, resolve_enumeration(spec, m, exact)) <= config.cap;
    }
    if (use_exact) {
      const ExactResult r = exact_delta(spec, m, config.notion, config.beta, exact);
      row.delta = r.value;
      row.engine = "exact";
      row.trials = 0;
      row.i_policy = "fixed";
      if (r.exact) row.delta_rational = to_string(*r.exact);
    } else {
      const StabilityEstimate e = estimate_delta(spec, m, mc);
      row.delta = e.delta_hat;
      row.ci_lo = e.ci.lower;
      row.ci_hi = e.ci.upper;
      row.engine = "mc";
      row.trials = e.trials;
      row.seed = e.seed;
      row.i_policy = std::string(to_string(e.i_policy));
    }
    out.rows.push_back(std::move(row));
  }

  const bool rational_column = config.arithmetic == Arithmetic::Rational;
  out.csv = write_csv(out.rows, rational_column);
  json manifest{{"tool", "ermstab"},
                {"version", version()},
                {"config", config_to_json(config)},
                {"scenario", scenario_to_json(spec)},
                {"columns", json(std::vector<std::string>(std::begin(kSeriesColumns), std::end(kSeriesColumns)))},
                {"rational_column", rational_column},
                {"rows", out.rows.size()},
                {"exact_engine", {{"position", "i = m"}, {"cap", config.cap}}},
                {"monte_carlo",
                 {{"generator", "splitmix64, one stream per trial"},
                  {"trial_seed", "mix64(seed ^ mix64(m + 0x9e3779b97f4a7c15) ^ mix64(trial + 0xd1b54a32d192ed03))"},
                  {"mix64", "splitmix64 finalizer"},
                  {"sampling", "inverse CDF over atoms; S, then U, then i when i_policy = uniform"},
                  {"interval", kIntervalMethod},
                  {"z", kWilsonZ95}}}};
  out.manifest = manifest.dump(2) + "\n";
  return out;
}

std::vector<std::string> bound_names() {
  return {"majority_vote_training_rate", "majority_vote_weak_rate", "tie_gap_probability", "tie_gap_upper_bound",
          "tie_gap_window_minimum",      "erm_in_hstar_lower_bound", "pair_mismatch_prob", "central_window_prob",
          "odd_central_binom_prob"};
}

std::vector<SeriesRow> evaluate_bound(const BoundRequest& req) {
  if (req.grid.empty()) throw ValidationError("bounds need a nonempty grid");
  auto need_p = [&]() -> const Rational& {
    if (!req.p) throw ValidationError(req.name + " needs --p");
    if (*req.p < 0 || *req.p > 1) throw ValidationError("p must lie in [0, 1]");
    return *req.p;
  };
  std::string label = req.name;
  if (req.p) label += "(p=" + to_string(*req.p) + ")";
  if (req.name == "erm_in_hstar_lower_bound") {
    if (!req.hypotheses || !req.gap) throw ValidationError(req.name + " needs --hypotheses and --gap");
    label += "(H=" + std::to_string(*req.hypotheses) + ",gap=" + to_string(*req.gap) + ")";
  }

  std::vector<SeriesRow> rows;
  for (std::size_t m : req.grid) {
    SeriesRow row;
    row.scenario = label;
    row.m = m;
    row.engine = "bound";
    std::optional<Rational> exact;
    if (req.name == "majority_vote_training_rate") {
      row.delta = majority_vote_training_rate(m);
    } else if (req.name == "majority_vote_weak_rate") {
      row.delta = majority_vote_weak_rate(to_double(need_p()), m);
    } else if (req.name == "tie_gap_probability") {
      exact = tie_gap_probability(need_p(), m);
    } else if (req.name == "tie_gap_upper_bound") {
      exact = tie_gap_upper_bound(need_p(), m).total();
    } else if (req.name == "tie_gap_window_minimum") {
      exact = tie_gap_window_minimum(m);
    } else if (req.name == "erm_in_hstar_lower_bound") {
      row.delta = erm_in_hstar_lower_bound(*req.hypotheses, std::optional<Rational>(*req.gap), m).clamped;
    } else if (req.name == "pair_mismatch_prob") {
      exact = pair_mismatch_prob(need_p());
    } else if (req.name == "central_window_prob") {
      exact = central_window_prob(m);
    } else if (req.name == "odd_central_binom_prob") {
      exact = odd_central_binom_prob(m);
    } else {
      std::string known;
      for (const auto& n : bound_names()) known += (known.empty() ? "" : ", ") + n;
      throw ValidationError("unknown bound '" + req.name + "' (known: " + known + ")");
    }
    if (exact) {
      row.delta = to_double(*exact);
      row.delta_rational = to_string(*exact);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string read_all(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_all(path));
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, std::string> out;
  for (const auto& kv : items) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--param expects key=value; got '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

struct RunFlags {
  std::string config_path;
  std::string scenario;
  std::vector<std::string> params;
  std::string scenario_file;
  std::string notion, beta, grid, engine, i_policy, arithmetic, csv, manifest;
  std::optional<std::uint64_t> trials, seed;
  std::optional<std::size_t> workers;
  std::optional<double> cap;
};

ExperimentConfig build_config(const RunFlags& f) {
  json doc = json::object();
  std::filesystem::path base;
  if (!f.config_path.empty()) {
    doc = parse_json_file(f.config_path);
    base = std::filesystem::path(f.config_path).parent_path();
  }
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  if (!f.scenario.empty() && !f.scenario_file.empty()) {
    throw ValidationError("give either --scenario or --scenario-file, not both");
  }
  if (!f.scenario.empty()) {
    json ref{{"builtin", f.scenario}};
    for (const auto& [k, v] : parse_params(f.params)) ref[k] = v;
    doc["scenario"] = ref;
  } else if (!f.params.empty()) {
    throw ValidationError("--param needs --scenario");
  }
  if (!f.scenario_file.empty()) doc["scenario"] = json{{"file", std::filesystem::absolute(f.scenario_file).string()}};
  if (!f.notion.empty()) doc["notion"] = f.notion;
  if (!f.beta.empty()) doc["beta"] = f.beta;
  if (!f.grid.empty()) doc["grid"] = f.grid;
  if (!f.engine.empty()) doc["engine"] = f.engine;
  if (!f.i_policy.empty()) doc["i_policy"] = f.i_policy;
  if (!f.arithmetic.empty()) doc["arithmetic"] = f.arithmetic;
  if (!f.csv.empty()) doc["csv"] = f.csv;
  if (!f.manifest.empty()) doc["manifest"] = f.manifest;
  if (f.trials) doc["trials"] = *f.trials;
  if (f.seed) doc["seed"] = *f.seed;
  if (f.workers) doc["workers"] = *f.workers;
  if (f.cap) doc["cap"] = *f.cap;
  return config_from_json(doc, base);
}

int cmd_run(const RunFlags& flags) {
  const ExperimentConfig config = build_config(flags);
  const RunOutput out = run_experiment(config);
  if (config.csv) {
    write_file(*config.csv, out.csv);
  } else {
    std::cout << out.csv;
  }
  if (config.manifest) write_file(*config.manifest, out.manifest);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and Monte Carlo stability of empirical risk minimization on finite problems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  RunFlags rf;
  auto* run = app.add_subcommand("run", "Compute a delta(m) series and write CSV plus manifest");
  run->add_option("--config", rf.config_path, "JSON experiment config; flags below override its keys");
  run->add_option("--scenario", rf.scenario, "Built-in scenario name");
  run->add_option("--param", rf.params, "Built-in scenario parameter key=value (repeatable)");
  run->add_option("--scenario-file", rf.scenario_file, "JSON scenario document");
  run->add_option("--notion", rf.notion, "weak | cv | overlap | training");
  run->add_option("--beta", rf.beta, "Threshold in [0, 1), e.g. 0 or 1/10");
  run->add_option("--grid", rf.grid, "m values: 25,50,100 or 20:200:20");
  run->add_option("--engine", rf.engine, "exact | mc | auto");
  run->add_option("--trials", rf.trials, "Monte Carlo trials per m");
  run->add_option("--seed", rf.seed, "Monte Carlo master seed");
  run->add_option("--workers", rf.workers, std::string("Monte Carlo worker threads (default $") + kWorkersEnv + ")");
  run->add_option("--i-policy", rf.i_policy, "fixed | uniform");
  run->add_option("--arithmetic", rf.arithmetic, "rational | float");
  run->add_option("--cap", rf.cap, "Exact enumeration cap");
  run->add_option("--csv", rf.csv, "Series CSV path (stdout when omitted)");
  run->add_option("--manifest", rf.manifest, "Run manifest path");

  std::string series_path, fit_out, weighting = "none";
  ClassifyConfig thresholds;
  auto* fit = app.add_subcommand("fit", "Fit power-law and exponential decay to a series CSV");
  fit->add_option("series", series_path, "Series CSV ('-' for stdin)")->required();
  fit->add_option("--weighting", weighting, "none | interval");
  fit->add_option("--rss-ratio", thresholds.rss_ratio, "Required residual ratio");
  fit->add_option("--min-exponent", thresholds.min_exponent, "Smallest accepted power-law exponent");
  fit->add_option("--max-exponent", thresholds.max_exponent, "Largest accepted power-law exponent");
  fit->add_option("--min-span", thresholds.min_span, "Required ratio of largest to smallest m");
  fit->add_option("--min-points", thresholds.min_points, "Required number of points");
  fit->add_option("--out", fit_out, "Report path (stdout when omitted)");

  BoundRequest br;
  std::string bound_p, bound_gap, bound_grid, bound_csv;
  std::size_t bound_h = 0;
  auto* bounds = app.add_subcommand("bounds", "Evaluate a closed-form bound over a grid");
  bounds->add_option("name", br.name, "Bound name (see --list)");
  bounds->add_option("--p", bound_p, "Disagreement mass or label probability");
  bounds->add_option("--hypotheses", bound_h, "Hypothesis count");
  bounds->add_option("--gap", bound_gap, "Risk gap");
  bounds->add_option("--grid", bound_grid, "m (or k) values");
  bounds->add_option("--csv", bound_csv, "Output path (stdout when omitted)");
  bool list_bounds = false;
  bounds->add_flag("--list", list_bounds, "List bound names");

  std::string fault = "none";
  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run the invariant suite and print a per-check table");
  verify->add_option("--inject-fault", fault, "none | tie-break");
  verify->add_option("--cap", vo.cap, "Exact enumeration cap for the checks");
  verify->add_option("--workers", vo.workers, "Monte Carlo worker threads");

  std::string scenario_name;
  std::vector<std::string> scenario_params;
  bool list_scenarios = false;
  auto* show = app.add_subcommand("scenario", "Print a scenario document with its derived metadata");
  show->add_option("name", scenario_name, "Built-in scenario name");
  show->add_option("--param", scenario_params, "Parameter key=value (repeatable)");
  show->add_flag("--list", list_scenarios, "List the default built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*run) return cmd_run(rf);

    if (*fit) {
      if (weighting == "interval") {
        thresholds.weighting = Weighting::ConfidenceInterval;
      } else if (weighting != "none") {
        throw ValidationError("--weighting must be none or interval");
      }
      const json report = fit_report(series_from_rows(read_csv(read_all(series_path))), thresholds);
      if (fit_out.empty()) {
        std::cout << report.dump(2) << "\n";
      } else {
        write_file(fit_out, report.dump(2) + "\n");
      }
      return kExitOk;
    }

    if (*bounds) {
      if (list_bounds) {
        for (const auto& n : bound_names()) std::cout << n << "\n";
        return kExitOk;
      }
      if (br.name.empty()) throw ValidationError("bounds needs a name (see --list)");
      if (!bound_p.empty()) br.p = parse_rational(bound_p);
      if (!bound_gap.empty()) br.gap = parse_rational(bound_gap);
      if (bound_h > 0) br.hypotheses = bound_h;
      if (bound_grid.empty()) throw ValidationError("bounds needs --grid");
      br.grid = parse_grid(bound_grid);
      const auto rows = evaluate_bound(br);
      bool rational = false;
      for (const auto& r : rows) rational = rational || r.delta_rational.has_value();
      const std::string csv = write_csv(rows, rational);
      if (bound_csv.empty()) {
        std::cout << csv;
      } else {
        write_file(bound_csv, csv);
      }
      return kExitOk;
    }

    if (*verify) {
      if (fault == "tie-break") {
        vo.fault = Fault::TieBreak;
      } else if (fault != "none") {
        throw ValidationError("--inject-fault must be none or tie-break");
      }
      const auto checks = run_verification(vo);
      std::cout << format_checks(checks);
      for (const auto& c : checks) {
        if (c.status == CheckStatus::Fail) return kExitVerification;
      }
      return kExitOk;
    }

    if (*show) {
      if (list_scenarios) {
        for (const auto& s : builtin_scenarios()) std::cout << s.name << "\n";
        return kExitOk;
      }
      if (scenario_name.empty()) throw ValidationError("scenario needs a name (see --list)");
      const ScenarioSpec s = builtin_scenario(scenario_name, parse_params(scenario_params));
      json doc = scenario_to_json(s);
      json risks = json::array();
      for (const auto& r : s.risks()) risks.push_back(to_string(r));
      json meta{{"risks", risks}, {"minimizers", s.minimizers().indices}};
      meta["gap"] = s.minimizers().gap ? json(to_string(*s.minimizers().gap)) : json(nullptr);
      if (s.pair) meta["disagreement"] = to_string(s.pair->disagreement);
      std::cout << json{{"scenario", doc}, {"metadata", meta}}.dump(2) << "\n";
      return kExitOk;
    }
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const UndefinedConditional& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

}  // namespace ermstab::cli
