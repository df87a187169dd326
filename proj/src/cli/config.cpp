#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ermstab/cli.hpp"
#include "ermstab/errors.hpp"

#ifndef ERMSTAB_VERSION
#define ERMSTAB_VERSION "0.0.0"
#endif

namespace ermstab::cli {

using nlohmann::json;

std::string_view version() { return ERMSTAB_VERSION; }

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::Exact: return "exact";
    case Engine::MonteCarlo: return "mc";
    case Engine::Auto: return "auto";
  }
  return "?";
}

Engine parse_engine(std::string_view text) {
  if (text == "exact") return Engine::Exact;
  if (text == "mc") return Engine::MonteCarlo;
  if (text == "auto") return Engine::Auto;
  throw ValidationError("unknown engine '" + std::string(text) + "' (expected exact|mc|auto)");
}

namespace {

std::uint64_t parse_unsigned(const std::string& text, const std::string& what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ValidationError(what + " must be a nonnegative integer; got '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::out_of_range&) {
    throw ValidationError(what + " is out of range: " + text);
  }
}

Arithmetic parse_arithmetic(const std::string& text) {
  if (text == "rational") return Arithmetic::Rational;
  if (text == "float") return Arithmetic::Float;
  throw ValidationError("unknown arithmetic '" + text + "' (expected rational|float)");
}

Rational json_fraction(const json& v, const std::string& what) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number_float()) {
    // shortest decimal that round-trips, so 0.1 reads as 1/10
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v.get<double>());
    return parse_rational(std::string(buf, res.ptr));
  }
  throw ValidationError(what + " must be a fraction string like \"1/4\" or a number");
}

}  // namespace

std::size_t default_workers() {
  const char* env = std::getenv(kWorkersEnv);
  if (env == nullptr || *env == '\0') return 1;
  const auto w = parse_unsigned(env, kWorkersEnv);
  if (w < 1) throw ValidationError(std::string(kWorkersEnv) + " must be at least 1");
  return static_cast<std::size_t>(w);
}

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(parse_unsigned(item, "grid value"));
      continue;
    }
    const auto second = item.find(':', colon + 1);
    if (second == std::string::npos) throw ValidationError("grid range must be start:stop:step; got '" + item + "'");
    const auto start = parse_unsigned(item.substr(0, colon), "grid start");
    const auto stop = parse_unsigned(item.substr(colon + 1, second - colon - 1), "grid stop");
    const auto step = parse_unsigned(item.substr(second + 1), "grid step");
    if (step == 0) throw ValidationError("grid step must be positive");
    for (auto m = start; m <= stop; m += step) out.push_back(m);
  }
  if (out.empty()) throw ValidationError("m grid must be nonempty");
  return out;
}

ExperimentConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  static const char* known[] = {"scenario", "notion",     "beta", "grid", "engine",  "trials",  "seed",
                                "workers",  "i_policy",   "arithmetic", "cap",  "csv", "manifest"};
  for (const auto& [k, v] : doc.items()) {
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    if (!ok) throw ValidationError("unknown config key '" + k + "'");
  }
  ExperimentConfig c;
  c.workers = default_workers();
  try {
    if (doc.contains("scenario")) {
      c.scenario = doc.at("scenario");
      if (c.scenario.is_string()) c.scenario = json{{"builtin", c.scenario}};
      if (c.scenario.is_object() && c.scenario.contains("file")) {
        std::filesystem::path p = c.scenario.at("file").get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        c.scenario["file"] = p.string();
      }
    }
    if (doc.contains("notion")) c.notion = parse_notion(doc.at("notion").get<std::string>());
    if (doc.contains("beta")) c.beta = json_fraction(doc.at("beta"), "beta");
    if (doc.contains("grid")) {
      const auto& g = doc.at("grid");
      if (g.is_string()) {
        c.grid = parse_grid(g.get<std::string>());
      } else {
        for (const auto& v : g) {
          if (!v.is_number_unsigned()) throw ValidationError("grid entries must be positive integers");
          c.grid.push_back(v.get<std::size_t>());
        }
      }
    }
    if (doc.contains("engine")) c.engine = parse_engine(doc.at("engine").get<std::string>());
    if (doc.contains("trials")) c.trials = doc.at("trials").get<std::uint64_t>();
    if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("workers")) c.workers = doc.at("workers").get<std::size_t>();
    if (doc.contains("i_policy")) c.i_policy = parse_i_policy(doc.at("i_policy").get<std::string>());
    if (doc.contains("arithmetic")) c.arithmetic = parse_arithmetic(doc.at("arithmetic").get<std::string>());
    if (doc.contains("cap")) c.cap = doc.at("cap").get<double>();
    if (doc.contains("csv")) c.csv = doc.at("csv").get<std::string>();
    if (doc.contains("manifest")) c.manifest = doc.at("manifest").get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  return json{{"scenario", c.scenario},
              {"notion", to_string(c.notion)},
              {"beta", to_string(c.beta)},
              {"grid", c.grid},
              {"engine", to_string(c.engine)},
              {"trials", c.trials},
              {"seed", c.seed},
              {"i_policy", to_string(c.i_policy)},
              {"arithmetic", to_string(c.arithmetic)},
              {"cap", c.cap}};
}

void validate(const ExperimentConfig& c) {
  if (c.scenario.is_null()) throw ValidationError("no scenario given");
  if (c.grid.empty()) throw ValidationError("m grid must be nonempty");
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    if (c.grid[k] < 2) throw ValidationError("every m in the grid must be at least 2");
    if (k > 0 && c.grid[k] <= c.grid[k - 1]) throw ValidationError("m grid must be strictly increasing");
  }
  if (c.engine != Engine::Exact && c.trials < 1) throw ValidationError("trials must be at least 1");
  if (c.workers < 1) throw ValidationError("workers must be at least 1");
  if (!(c.cap > 0)) throw ValidationError("cap must be positive");
  validate_beta(c.beta);
}

ScenarioSpec resolve_scenario(const json& ref) {
  if (ref.is_object() && ref.contains("file")) {
    const std::string path = ref.at("file").get<std::string>();
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ValidationError("scenario file '" + path + "' is not valid JSON: " + e.what());
    }
    return load_scenario(doc);
  }
  return load_scenario(ref);
}

}  // namespace ermstab::cli
