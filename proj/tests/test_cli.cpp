#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "ermstab/cli.hpp"
#include "ermstab/errors.hpp"

using namespace ermstab;
using namespace ermstab::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int run_cli(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"ermstab"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : store) argv.push_back(s.data());
  return cli::main(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ermstab_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

ExperimentConfig baseline_config() {
  ExperimentConfig c;
  c.scenario = json{{"builtin", "two_constant"}, {"p", "1/2"}};
  c.grid = {25, 50, 100};
  c.engine = Engine::Exact;
  return c;
}

std::string synthetic_csv(double (*delta)(double)) {
  std::vector<SeriesRow> rows;
  for (std::size_t m = 10; m <= 200; m += 10) {
    SeriesRow r;
    r.scenario = "synthetic";
    r.notion = "cv";
    r.beta = "0";
    r.m = m;
    r.delta = delta(static_cast<double>(m));
    r.engine = "exact";
    r.i_policy = "fixed";
    rows.push_back(r);
  }
  return write_csv(rows, false);
}

}  // namespace

TEST_CASE("grid parsing") {
  CHECK(parse_grid("25,50,100") == std::vector<std::size_t>{25, 50, 100});
  CHECK(parse_grid("20:60:20") == std::vector<std::size_t>{20, 40, 60});
  CHECK(parse_grid("2, 5:9:2") == std::vector<std::size_t>{2, 5, 7, 9});
  CHECK_THROWS_AS(parse_grid(""), ValidationError);
  CHECK_THROWS_AS(parse_grid("3:9"), ValidationError);
  CHECK_THROWS_AS(parse_grid("3:9:0"), ValidationError);
  CHECK_THROWS_AS(parse_grid("x"), ValidationError);
  CHECK_THROWS_AS(parse_grid("-4"), ValidationError);
}

TEST_CASE("config documents") {
  const json doc = json::parse(R"({"scenario": "three_hyp_two_min", "notion": "weak", "beta": "1/10",
      "grid": "10:30:10", "engine": "mc", "trials": 500, "seed": 7, "i_policy": "uniform",
      "arithmetic": "float", "cap": 1000})");
  const auto c = config_from_json(doc);
  CHECK(c.scenario == json{{"builtin", "three_hyp_two_min"}});
  CHECK(c.notion == Notion::WeakHypothesis);
  CHECK(c.beta == Rational(1, 10));
  CHECK(c.grid == std::vector<std::size_t>{10, 20, 30});
  CHECK(c.engine == Engine::MonteCarlo);
  CHECK(c.trials == 500);
  CHECK(c.seed == 7);
  CHECK(c.i_policy == IPolicy::Uniform);
  CHECK(c.arithmetic == Arithmetic::Float);
  CHECK(c.cap == 1000);
  CHECK_NOTHROW(validate(c));

  SUBCASE("numeric beta is read as its shortest decimal") {
    CHECK(config_from_json(json{{"beta", 0.1}}).beta == Rational(1, 10));
    CHECK(config_from_json(json{{"beta", 0}}).beta == 0);
  }
  SUBCASE("relative scenario files resolve against the config directory") {
    const auto r = config_from_json(json{{"scenario", {{"file", "s.json"}}}}, "/cfg");
    CHECK(r.scenario.at("file") == (fs::path("/cfg") / "s.json").string());
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(config_from_json(json{{"bogus", 1}}), ValidationError);
    CHECK_THROWS_AS(config_from_json(json{{"trials", "many"}}), ValidationError);
    CHECK_THROWS_AS(config_from_json(json{{"engine", "fast"}}), ValidationError);
    CHECK_THROWS_AS(config_from_json(json::array()), ValidationError);
    CHECK_THROWS_AS(config_from_json(json{{"beta", "a/b"}}), ValidationError);
  }
  SUBCASE("validation") {
    auto bad = c;
    bad.grid = {10, 10};
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = c;
    bad.grid = {1, 5};
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = c;
    bad.beta = 1;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = c;
    bad.trials = 0;
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad.engine = Engine::Exact;
    CHECK_NOTHROW(validate(bad));
    bad = c;
    bad.scenario = nullptr;
    CHECK_THROWS_AS(validate(bad), ValidationError);
  }
}

TEST_CASE("CSV round trip") {
  SeriesRow a;
  a.scenario = "name, with \"quotes\"";
  a.notion = "cv";
  a.beta = "1/10";
  a.m = 40;
  a.delta = 0.1;
  a.ci_lo = 0.05;
  a.ci_hi = 0.15;
  a.engine = "mc";
  a.trials = 1000;
  a.seed = 3;
  a.i_policy = "uniform";
  SeriesRow b = a;
  b.ci_lo.reset();
  b.ci_hi.reset();
  b.seed.reset();
  b.engine = "exact";
  b.trials = 0;
  b.delta_rational = "1/10";
  b.delta = 1.0 / 3.0;

  const std::string text = write_csv({a, b}, true);
  CHECK(text.substr(0, text.find('\n')) ==
        "scenario,notion,beta,m,delta,ci_lo,ci_hi,engine,trials,seed,i_policy,delta_rational");
  const auto back = read_csv(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].scenario == a.scenario);
  CHECK(back[0].ci_lo == a.ci_lo);
  CHECK(back[0].seed == a.seed);
  CHECK(!back[0].delta_rational);
  CHECK(back[1].delta == b.delta);  // %.17g is lossless
  CHECK(!back[1].ci_lo);
  CHECK(!back[1].seed);
  CHECK(back[1].delta_rational == b.delta_rational);

  const auto series = series_from_rows(back);
  CHECK(!series.points[0].exact);
  CHECK(series.points[1].exact);

  CHECK_THROWS_AS(read_csv(""), ValidationError);
  CHECK_THROWS_AS(read_csv("m,x\n1,2\n"), ValidationError);
  CHECK_THROWS_AS(read_csv("m,delta\n1\n"), ValidationError);
  CHECK_THROWS_AS(read_csv("m,delta\n1,abc\n"), ValidationError);
  CHECK_THROWS_AS(read_csv("m,delta\n\"1,0.5\n"), ValidationError);
}

TEST_CASE("exact runs") {
  const auto out = run_experiment(baseline_config());
  REQUIRE(out.rows.size() == 3);
  for (const auto& r : out.rows) {
    CHECK(r.engine == "exact");
    CHECK(r.trials == 0);
    CHECK(!r.ci_lo);
    CHECK(!r.seed);
    REQUIRE(r.delta_rational);
    CHECK(to_double(parse_rational(*r.delta_rational)) == doctest::Approx(r.delta).epsilon(1e-15));
  }
  // two_constant(1/2) at m = 25 differs exactly when the first 24 labels split
  // 12/12 and the two resampled labels differ
  Rational expected(2704156, 1 << 25);
  expected.canonicalize();
  CHECK(parse_rational(*out.rows[0].delta_rational) == expected);

  const auto again = run_experiment(baseline_config());
  CHECK(again.csv == out.csv);
  CHECK(again.manifest == out.manifest);

  const auto manifest = json::parse(out.manifest);
  CHECK(manifest.at("version") == std::string(version()));
  CHECK(manifest.at("config").at("grid") == json{25, 50, 100});
  CHECK(!manifest.at("config").contains("workers"));
  CHECK(out.manifest.find("time") == std::string::npos);

  auto floaty = baseline_config();
  floaty.arithmetic = Arithmetic::Float;
  const auto f = run_experiment(floaty);
  CHECK(!f.rows[0].delta_rational);
  CHECK(f.csv.find("delta_rational") == std::string::npos);
}

TEST_CASE("Monte Carlo runs do not depend on the worker count") {
  ExperimentConfig c;
  c.scenario = json{{"builtin", "irrelevant_feature"}};
  c.grid = {4, 16};
  c.engine = Engine::MonteCarlo;
  c.trials = 4000;
  c.seed = 5;
  c.i_policy = IPolicy::Uniform;
  c.workers = 1;
  const auto one = run_experiment(c);
  c.workers = 8;
  const auto eight = run_experiment(c);
  CHECK(one.csv == eight.csv);
  CHECK(one.manifest == eight.manifest);
  for (const auto& r : one.rows) {
    CHECK(r.engine == "mc");
    CHECK(r.trials == 4000);
    CHECK(r.seed == 5u);
    CHECK(r.i_policy == "uniform");
    REQUIRE(r.ci_lo);
    CHECK(*r.ci_lo <= r.delta);
    CHECK(r.delta <= *r.ci_hi);
  }
  c.seed = 6;
  CHECK(run_experiment(c).csv != one.csv);
}

TEST_CASE("engine selection around the cap") {
  ExperimentConfig c;
  c.scenario = json{{"builtin", "symmetric_n_min"}, {"n", 5}};
  c.grid = {3, 60};
  c.trials = 500;
  c.cap = 1e4;
  const auto out = run_experiment(c);
  CHECK(out.rows[0].engine == "exact");
  CHECK(out.rows[1].engine == "mc");

  c.engine = Engine::Exact;
  CHECK_THROWS_AS(run_experiment(c), CapExceeded);
}

TEST_CASE("fit reports") {
  const auto power = read_csv(synthetic_csv([](double m) { return 0.4 * std::pow(m, -0.5); }));
  const auto rp = fit_report(series_from_rows(power), ClassifyConfig{});
  CHECK(rp.at("classification") == "PowerLaw");
  CHECK(rp.at("power_law").at("alpha").get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rp.at("power_law").at("c").get<double>() == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(rp.at("points_used") == 20);

  const auto expo = read_csv(synthetic_csv([](double m) { return 0.9 * std::exp(-0.03 * m); }));
  const auto re = fit_report(series_from_rows(expo), ClassifyConfig{});
  CHECK(re.at("classification") == "Exponential");
  CHECK(re.at("exponential").at("b").get<double>() == doctest::Approx(0.03).epsilon(1e-9));

  auto rows = power;
  rows.resize(3);
  CHECK_THROWS_AS(fit_report(series_from_rows(rows), ClassifyConfig{}), ValidationError);
}

TEST_CASE("bounds") {
  BoundRequest r;
  r.name = "tie_gap_probability";
  r.p = Rational(1, 2);
  r.grid = {3, 10};
  const auto rows = evaluate_bound(r);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].engine == "bound");
  CHECK(rows[0].delta_rational == std::string("7/8"));

  r.name = "majority_vote_training_rate";
  r.p.reset();
  r.grid = {50};
  CHECK(evaluate_bound(r)[0].delta == doctest::Approx(1.0 / std::sqrt(2 * M_PI * 50)));

  r.name = "majority_vote_weak_rate";
  CHECK_THROWS_AS(evaluate_bound(r), ValidationError);
  r.p = Rational(2, 5);
  CHECK_THROWS_AS(evaluate_bound(r), ValidationError);
  r.p = Rational(7, 10);
  const double e = (2.0 - 1.0 / 0.7) * (2.0 - 1.0 / 0.7) / 8.0;
  CHECK(evaluate_bound(r)[0].delta == doctest::Approx(std::exp(-e * 50)));

  r.name = "no_such_bound";
  CHECK_THROWS_AS(evaluate_bound(r), ValidationError);
  for (const auto& name : bound_names()) CHECK(!name.empty());
}

TEST_CASE("exit codes") {
  const auto csv = scratch("run.csv");
  const auto manifest = scratch("run.json");
  CHECK(run_cli({"run", "--scenario", "two_constant", "--param", "p=1/2", "--grid", "5,10", "--engine", "exact",
                 "--csv", csv.string(), "--manifest", manifest.string()}) == kExitOk);
  CHECK(read_csv(slurp(csv)).size() == 2);
  CHECK(json::parse(slurp(manifest)).at("rows") == 2);

  const auto cfg = scratch("config.json");
  spit(cfg, R"({"scenario": {"builtin": "unique_min", "margin": "1/5"}, "notion": "weak", "grid": [5, 10], "engine": "exact"})");
  const auto from_config = scratch("config.csv");
  CHECK(run_cli({"run", "--config", cfg.string(), "--grid", "6", "--csv", from_config.string()}) == kExitOk);
  const auto cfg_rows = read_csv(slurp(from_config));
  REQUIRE(cfg_rows.size() == 1);
  CHECK(cfg_rows[0].m == 6);
  CHECK(cfg_rows[0].notion == "weak");

  CHECK(run_cli({"run", "--scenario", "two_constant", "--beta", "1", "--grid", "5"}) == kExitValidation);
  CHECK(run_cli({"run", "--scenario", "nope", "--grid", "5"}) == kExitValidation);
  CHECK(run_cli({"run", "--grid", "5"}) == kExitValidation);
  CHECK(run_cli({"run", "--no-such-flag"}) == kExitValidation);
  CHECK(run_cli({"run", "--scenario", "symmetric_n_min", "--param", "n=5", "--grid", "200", "--engine", "exact",
                 "--cap", "1000"}) == kExitCap);
  CHECK(run_cli({"--help"}) == kExitOk);

  const auto fit_out = scratch("fit.json");
  CHECK(run_cli({"fit", csv.string(), "--out", fit_out.string()}) == kExitValidation);  // two points
  const auto series = scratch("series.csv");
  spit(series, synthetic_csv([](double m) { return std::pow(m, -0.7); }));
  CHECK(run_cli({"fit", series.string(), "--out", fit_out.string()}) == kExitOk);
  CHECK(json::parse(slurp(fit_out)).at("classification") == "PowerLaw");
  CHECK(run_cli({"fit", series.string(), "--weighting", "sideways"}) == kExitValidation);

  const auto bounds = scratch("bounds.csv");
  CHECK(run_cli({"bounds", "pair_mismatch_prob", "--p", "1/2", "--grid", "2", "--csv", bounds.string()}) == kExitOk);
  CHECK(read_csv(slurp(bounds))[0].delta_rational == std::string("1/8"));
  CHECK(run_cli({"bounds", "majority_vote_weak_rate", "--grid", "10"}) == kExitValidation);
}

TEST_CASE("verification suite") {
  VerifyOptions o;
  o.cap = 1e5;
  const auto clean = run_verification(o);
  int skipped = 0;
  for (const auto& c : clean) {
    CHECK_MESSAGE(c.status != CheckStatus::Fail, c.name << ": " << c.detail);
    skipped += c.status == CheckStatus::Skip;
  }
  CHECK(skipped > 0);  // the five-minimizer series cannot be enumerated under this cap
  CHECK(format_checks(clean).find("SKIP") != std::string::npos);

  o.fault = Fault::TieBreak;
  const auto faulty = run_verification(o);
  int failed = 0;
  for (const auto& c : faulty) failed += c.status == CheckStatus::Fail;
  CHECK(failed >= 1);
  CHECK(run_cli({"verify", "--inject-fault", "tie-break", "--cap", "1e5"}) == kExitVerification);
  CHECK(run_cli({"verify", "--inject-fault", "gremlins"}) == kExitValidation);
}
