#pragma once

// Experiment configuration, series CSV and manifest I/O, and the command
// implementations behind the ermstab executable.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ermstab/analysis.hpp"
#include "ermstab/exact.hpp"
#include "ermstab/mc.hpp"

namespace ermstab::cli {

// keep the library overloads visible next to the ones declared here
using ermstab::to_string;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCap = 3;
inline constexpr int kExitVerification = 4;

/// Environment variable holding the default MC worker count.
inline constexpr const char* kWorkersEnv = "ERMSTAB_WORKERS";

std::string_view version();

enum class Engine { Exact, MonteCarlo, Auto };
std::string_view to_string(Engine e);
Engine parse_engine(std::string_view text);

struct ExperimentConfig {
  /// {"builtin": name, params...}, {"file": path} or an inline scenario document.
  nlohmann::json scenario;
  Notion notion = Notion::CV;
  Rational beta = 0;
  std::vector<std::size_t> grid;
  Engine engine = Engine::Auto;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  IPolicy i_policy = IPolicy::Fixed;
  Arithmetic arithmetic = Arithmetic::Rational;
  double cap = kDefaultEnumerationCap;
  std::optional<std::string> csv;
  std::optional<std::string> manifest;
};

/// Worker count from the environment, 1 when unset.
std::size_t default_workers();

/// Parses "25,50,100" or "start:stop:step" (inclusive), or a mix of both.
std::vector<std::size_t> parse_grid(const std::string& text);

/// Reads a config document. A relative {"file": ...} scenario is resolved
/// against `base_dir`.
ExperimentConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Everything that determines the output rows; the worker count and output
/// paths are left out so manifests do not depend on them.
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Grid nonempty and strictly increasing with m >= 2, trials >= 1, beta in [0, 1).
void validate(const ExperimentConfig& config);

ScenarioSpec resolve_scenario(const nlohmann::json& ref);

/// One line of the series CSV.
struct SeriesRow {
  std::string scenario;
  std::string notion;
  std::string beta;
  std::size_t m = 0;
  double delta = 0.0;
  std::optional<double> ci_lo;
  std::optional<double> ci_hi;
  std::string engine;
  std::uint64_t trials = 0;
  std::optional<std::uint64_t> seed;
  std::string i_policy;
  std::optional<std::string> delta_rational;
};

inline constexpr const char* kSeriesColumns[] = {"scenario", "notion", "beta",   "m",    "delta",   "ci_lo",
                                                 "ci_hi",    "engine", "trials", "seed", "i_policy"};

/// %.17g.
std::string format_double(double v);

/// Header plus rows. With `rational_column` a trailing delta_rational column is added.
std::string write_csv(const std::vector<SeriesRow>& rows, bool rational_column);
std::vector<SeriesRow> read_csv(const std::string& text);

struct RunOutput {
  ScenarioSpec scenario;
  std::vector<SeriesRow> rows;
  std::string csv;
  std::string manifest;
};

/// Runs every grid point with the configured engine. Auto picks the exact
/// engine when its enumeration fits under the cap and Monte Carlo otherwise;
/// an explicit exact request over the cap throws CapExceeded.
RunOutput run_experiment(const ExperimentConfig& config);

/// Converts CSV rows to a rate series; Monte Carlo rows carry their interval.
RateSeries series_from_rows(const std::vector<SeriesRow>& rows);

nlohmann::json fit_report(const RateSeries& series, const ClassifyConfig& config);

/// Named closed-form quantities for the bounds command.
struct BoundRequest {
  std::string name;
  std::optional<Rational> p;
  std::optional<std::size_t> hypotheses;
  std::optional<Rational> gap;
  std::vector<std::size_t> grid;
};

std::vector<std::string> bound_names();
std::vector<SeriesRow> evaluate_bound(const BoundRequest& request);

enum class CheckStatus { Pass, Fail, Skip };
std::string_view to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
  double seconds = 0.0;
};

enum class Fault { None, TieBreak };

struct VerifyOptions {
  Fault fault = Fault::None;
  double cap = kDefaultEnumerationCap;
  std::size_t workers = 1;
};

std::vector<CheckResult> run_verification(const VerifyOptions& options);
std::string format_checks(const std::vector<CheckResult>& checks);

/// Entry point of the executable; returns the process exit code.
int main(int argc, char** argv);

}  // namespace ermstab::cli
