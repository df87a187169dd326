#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "ermstab/bounds.hpp"
#include "ermstab/cli.hpp"
#include "ermstab/errors.hpp"

namespace ermstab::cli {

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Skip: return "SKIP";
  }
  return "?";
}

namespace {

/// Thrown inside a check body to report a failure with a reason.
struct CheckFailed {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw CheckFailed{why};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Rational frac(long a, long b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

class Suite {
 public:
  explicit Suite(const VerifyOptions& o) : options_(o) {}

  void check(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.detail = body();
      r.status = CheckStatus::Pass;
    } catch (const CheckFailed& f) {
      r.status = CheckStatus::Fail;
      r.detail = f.why;
    } catch (const CapExceeded& e) {
      r.status = CheckStatus::Skip;
      r.detail = std::string("over the enumeration cap: ") + e.what();
    } catch (const std::exception& e) {
      r.status = CheckStatus::Fail;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results_.push_back(std::move(r));
  }

  ExactOptions exact(Arithmetic a = Arithmetic::Rational, Enumeration e = Enumeration::Auto) const {
    ExactOptions o;
    o.arithmetic = a;
    o.enumeration = e;
    o.cap = options_.cap;
    return o;
  }

  std::vector<double> series(const ScenarioSpec& s, Notion n, const std::vector<double>& grid, Arithmetic a) const {
    std::vector<double> out;
    for (double m : grid) out.push_back(exact_delta(s, static_cast<std::size_t>(m), n, 0, exact(a)).value);
    return out;
  }

  const VerifyOptions& options() const { return options_; }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  VerifyOptions options_;
  std::vector<CheckResult> results_;
};

std::vector<double> range(int from, int to, int step) {
  std::vector<double> g;
  for (int m = from; m <= to; m += step) g.push_back(m);
  return g;
}

ClassifyConfig with_min_points(std::size_t n) {
  ClassifyConfig c;
  c.min_points = n;
  return c;
}

// Pr(|#Z2 - #Z1| <= 1) over n draws by listing every outcome sequence.
Rational tie_gap_by_listing(const Rational& p, std::size_t n) {
  const Rational half = p / 2;
  const Rational rest = 1 - p;
  std::vector<int> seq(n, 0);
  Rational total = 0;
  while (true) {
    long d = 0;
    Rational w = 1;
    for (int v : seq) {
      d += v == 1 ? 1 : v == 2 ? -1 : 0;
      w *= v == 0 ? rest : half;
    }
    if (std::labs(d) <= 1) total += w;
    std::size_t k = 0;
    while (k < n && ++seq[k] == 3) seq[k++] = 0;
    if (k == n) break;
  }
  return total;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  Suite suite(options);
  const auto scenarios = builtin_scenarios();
  const Rational half(1, 2);

  suite.check("exact baseline: fair coin, m = 3, CV = 1/4", [&] {
    // all 16 label vectors of (z1, z2, z3, u), majority with ties to +1
    int hits = 0;
    for (int bits = 0; bits < 16; ++bits) {
      auto y = [&](int k) { return (bits >> k) & 1 ? 1 : -1; };
      const int before = y(0) + y(1) + y(2) >= 0 ? 1 : -1;
      const int after = y(0) + y(1) + y(3) >= 0 ? 1 : -1;
      hits += before != after;
    }
    require(frac(hits, 16) == Rational(1, 4), "label listing gives " + std::to_string(hits) + "/16");
    const auto r = exact_delta(two_constant(half), 3, Notion::CV, 0, suite.exact());
    require(*r.exact == Rational(1, 4), "engine gives " + to_string(*r.exact));
    return std::string("1/4");
  });

  suite.check("enumeration strategies agree (m <= 6, all notions)", [&] {
    int compared = 0;
    for (const auto& s : scenarios) {
      for (std::size_t m = 2; m <= 6; ++m) {
        for (const Rational& beta : {Rational(0), frac(1, static_cast<long>(2 * (m - 1)))}) {
          for (auto n : kAllNotions) {
            const Rational a = *exact_delta(s, m, n, beta, suite.exact(Arithmetic::Rational, Enumeration::Sequences)).exact;
            const Rational b = *exact_delta(s, m, n, beta, suite.exact(Arithmetic::Rational, Enumeration::CountVectors)).exact;
            const Rational c = *exact_delta(s, m, n, beta, suite.exact(Arithmetic::Rational, Enumeration::RiskLattice)).exact;
            require(a == b && b == c, s.name + " m=" + std::to_string(m) + " " + std::string(to_string(n)));
            ++compared;
          }
        }
      }
    }
    return std::to_string(compared) + " cases";
  });

  suite.check("delta is the same at every replaced position (m <= 5)", [&] {
    for (const auto& s : scenarios) {
      for (std::size_t m = 2; m <= 5; ++m) {
        for (auto n : kAllNotions) {
          const Rational at_m = *exact_delta(s, m, n, 0, suite.exact()).exact;
          for (std::size_t i = 1; i < m; ++i) {
            ExactOptions o = suite.exact();
            o.position = i;
            require(*exact_delta(s, m, n, 0, o).exact == at_m, s.name + " m=" + std::to_string(m) + " i=" + std::to_string(i));
          }
        }
      }
    }
    return std::string("all positions equal");
  });

  suite.check("two-class fast path equals the generic engine (m <= 60)", [&] {
    for (const Rational& p : {half, frac(7, 10), frac(1, 3)}) {
      const auto s = two_constant(p);
      for (std::size_t m = 2; m <= 60; ++m) {
        for (auto n : kAllNotions) {
          require(*exact_delta_two_class(p, m, n, 0).exact == *exact_delta(s, m, n, 0, suite.exact()).exact,
                  "p=" + to_string(p) + " m=" + std::to_string(m));
        }
      }
    }
    return std::string("exact equality");
  });

  suite.check("float mode within 1e-10 of rational mode", [&] {
    double worst = 0;
    for (const auto& s : scenarios) {
      for (std::size_t m : {5, 20, 40}) {
        for (auto n : kAllNotions) {
          const double q = exact_delta(s, m, n, 0, suite.exact(Arithmetic::Rational)).value;
          const double f = exact_delta(s, m, n, 0, suite.exact(Arithmetic::Float)).value;
          worst = std::max(worst, std::abs(q - f));
        }
      }
    }
    require(worst <= 1e-10, "max difference " + fmt(worst));
    return "max difference " + fmt(worst);
  });

  suite.check("CV instability <= weak instability", [&] {
    for (const auto& s : scenarios) {
      for (std::size_t m : {3, 10, 30}) {
        const Rational cv = *exact_delta(s, m, Notion::CV, 0, suite.exact()).exact;
        const Rational weak = *exact_delta(s, m, Notion::WeakHypothesis, 0, suite.exact()).exact;
        require(cv <= weak, s.name + " m=" + std::to_string(m));
      }
    }
    return std::string("holds");
  });

  suite.check("majority vote tracks (2 pi m)^-1/2", [&] {
    const std::vector<double> grid{25, 50, 100, 200, 400};
    const auto d = suite.series(two_constant(half), Notion::CV, grid, Arithmetic::Rational);
    std::vector<double> ratio;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      ratio.push_back(d[k] / majority_vote_training_rate(static_cast<std::size_t>(grid[k])));
      require(ratio.back() >= 0.5 && ratio.back() <= 2.0, "ratio " + fmt(ratio.back()) + " at m=" + fmt(grid[k]));
    }
    const double lo = std::min({ratio[2], ratio[3], ratio[4]});
    const double hi = std::max({ratio[2], ratio[3], ratio[4]});
    require((hi - lo) / lo < 0.10, "ratio varies " + fmt((hi - lo) / lo));
    return "ratios " + fmt(ratio.front()) + " .. " + fmt(ratio.back());
  });

  suite.check("unique minimizer by margin 0.2: weak instability decays exponentially", [&] {
    const std::vector<double> grid{50, 100, 200, 300, 400};
    const auto d = suite.series(two_constant(frac(7, 10)), Notion::WeakHypothesis, grid, Arithmetic::Rational);
    const auto fit = classify(RateSeries::from_values(grid, d), with_min_points(5));
    require(fit.classification == RateClass::Exponential, std::string(to_string(fit.classification)));
    const double e = (2.0 - 1.0 / 0.7) * (2.0 - 1.0 / 0.7) / 8.0;
    const double c = std::log(d[0]) + e * grid[0];
    for (std::size_t k = 0; k < grid.size(); ++k) {
      require(std::log(d[k]) <= -e * grid[k] + c + 1e-12, "bound fails at m=" + fmt(grid[k]));
    }
    return "b = " + fmt(fit.exponential.rate);
  });

  auto power_law = [&](const ScenarioSpec& s, Arithmetic a) {
    const auto grid = range(20, 200, 20);
    const auto d = suite.series(s, Notion::CV, grid, a);
    const auto fit = classify(RateSeries::from_values(grid, d));
    require(fit.classification == RateClass::PowerLaw, s.name + ": " + std::string(to_string(fit.classification)));
    require(fit.power.exponent >= 0.35 && fit.power.exponent <= 0.65, "alpha = " + fmt(fit.power.exponent));
    double lo = 1e9, hi = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      lo = std::min(lo, std::sqrt(grid[k]) * d[k]);
      hi = std::max(hi, std::sqrt(grid[k]) * d[k]);
    }
    require(hi <= 3 * lo, "sqrt(m) delta spans " + fmt(lo) + " .. " + fmt(hi));
    return s.name + " alpha = " + fmt(fit.power.exponent);
  };
  suite.check("two minimizers: CV instability is a power law", [&] { return power_law(three_hyp_two_min(), Arithmetic::Rational); });
  suite.check("many minimizers and irrelevant features: power law", [&] {
    return power_law(symmetric_n_min(3), Arithmetic::Float) + "; " + power_law(irrelevant_feature(), Arithmetic::Float);
  });
  suite.check("five symmetric minimizers: power law", [&] { return power_law(symmetric_n_min(5), Arithmetic::Float); });

  suite.check("unique minimizer: weak instability classified exponential", [&] {
    const std::vector<double> grid{50, 100, 200, 300, 400};
    const auto d = suite.series(unique_min(frac(1, 5)), Notion::WeakHypothesis, grid, Arithmetic::Rational);
    const auto fit = classify(RateSeries::from_values(grid, d), with_min_points(5));
    require(fit.classification == RateClass::Exponential && fit.exponential.rate > 0,
            std::string(to_string(fit.classification)));
    return "b = " + fmt(fit.exponential.rate);
  });

  suite.check("tie-gap probability equals outcome listing", [&] {
    for (const Rational& p : {frac(3, 10), half, frac(4, 5)}) {
      for (std::size_t m = 2; m <= 10; ++m) {
        require(tie_gap_probability(p, m) == tie_gap_by_listing(p, m - 1), "p=" + to_string(p) + " m=" + std::to_string(m));
      }
    }
    return std::string("exact equality");
  });

  suite.check("tie-gap sandwich (m <= 200) and central binomial settling", [&] {
    for (std::size_t m = 3; m <= 200; ++m) {
      const Rational lower = tie_gap_window_minimum(m);
      require(lower >= odd_central_binom_prob(m - 1), "window minimum at m=" + std::to_string(m));
      for (long t = 1; t <= 9; ++t) {
        const Rational p = frac(t, 10);
        const Rational tg = tie_gap_probability(p, m);
        require(lower <= tg && tg <= tie_gap_upper_bound(p, m).total(), "m=" + std::to_string(m) + " p=" + to_string(p));
      }
    }
    double prev = std::sqrt(100.0) * odd_central_binom_prob_float(100);
    for (std::size_t k = 101; k <= 500; ++k) {
      const double now = std::sqrt(static_cast<double>(k)) * odd_central_binom_prob_float(k);
      require(std::abs(now / prev - 1) < 0.01, "k=" + std::to_string(k));
      prev = now;
    }
    return std::string("holds");
  });

  suite.check("ERM lands on a minimizer at least as often as the union bound says", [&] {
    for (const auto& s : scenarios) {
      if (!s.minimizers().gap) continue;
      for (std::size_t m = 1; m <= 60; ++m) {
        const double bound = erm_in_hstar_lower_bound(s.space.size(), s.minimizers().gap, m).raw;
        require(to_double(prob_erm_in_hstar(s, m, options.cap)) >= bound, s.name + " m=" + std::to_string(m));
      }
    }
    return std::string("holds for m <= 60");
  });

  suite.check("mismatched pair mass is p^2/2", [&] {
    int n = 0;
    for (const auto& s : scenarios) {
      if (!s.pair) continue;
      require(s.pair->mass_first_better == s.pair->mass_second_better, s.name);
      require(s.pair->pair_mismatch == pair_mismatch_prob(s.pair->disagreement), s.name);
      ++n;
    }
    return std::to_string(n) + " scenarios";
  });

  suite.check("switch probability given a near tie is at least 1/2", [&] {
    const TieRule rule = options.fault == Fault::TieBreak ? TieRule::AgainstReplaced : TieRule::IndexOrder;
    double worst = 1.0;
    for (const auto& s : {two_constant(half), three_hyp_two_min()}) {
      for (std::size_t m : {4, 5, 10, 11, 20, 21}) {
        const Rational v = conditional_switch_probability(s, m, rule).value;
        worst = std::min(worst, to_double(v));
        require(v >= half, s.name + " m=" + std::to_string(m) + ": " + to_string(v));
      }
    }
    return "minimum " + fmt(worst);
  });

  suite.check("Monte Carlo agrees with exact values", [&] {
    for (const auto& s : scenarios) {
      for (std::size_t m : {3, 8}) {
        for (auto n : {Notion::CV, Notion::WeakHypothesis}) {
          McConfig c;
          c.trials = 20000;
          c.master_seed = 11;
          c.workers = options.workers;
          c.notion = n;
          const auto est = estimate_delta(s, m, c);
          const double exact = exact_delta(s, m, n, 0, suite.exact()).value;
          require(std::abs(est.delta_hat - exact) <= 4 * est.ci.half_width(), s.name + " m=" + std::to_string(m));
        }
      }
    }
    return std::string("within 4 half-widths");
  });

  suite.check("Monte Carlo interval coverage", [&] {
    int covered = 0;
    McConfig c;
    c.trials = 2000;
    c.workers = options.workers;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      c.master_seed = seed;
      const auto est = estimate_delta(two_constant(half), 3, c);
      covered += est.ci.lower <= 0.25 && 0.25 <= est.ci.upper;
    }
    require(covered >= 90, std::to_string(covered) + "/100");
    return std::to_string(covered) + "/100";
  });

  suite.check("run output is identical across worker counts", [&] {
    ExperimentConfig c;
    c.scenario = nlohmann::json{{"builtin", "three_hyp_two_min"}};
    c.grid = {3, 9, 27};
    c.engine = Engine::MonteCarlo;
    c.trials = 5000;
    c.seed = 99;
    c.workers = 1;
    const auto base = run_experiment(c);
    for (std::size_t w : {2, 8}) {
      c.workers = w;
      const auto other = run_experiment(c);
      require(other.csv == base.csv && other.manifest == base.manifest, "differs at " + std::to_string(w) + " workers");
    }
    return std::string("1, 2, 8 workers");
  });

  suite.check("rate fits recover synthetic parameters", [&] {
    const auto grid = range(10, 320, 10);
    std::vector<double> pw, ex;
    for (double m : grid) {
      pw.push_back(0.8 * std::pow(m, -0.5));
      ex.push_back(0.5 * std::exp(-0.02 * m));
    }
    const auto fp = classify(RateSeries::from_values(grid, pw));
    const auto fe = classify(RateSeries::from_values(grid, ex));
    require(fp.classification == RateClass::PowerLaw && std::abs(fp.power.exponent - 0.5) < 1e-6 &&
                std::abs(fp.power.coefficient - 0.8) < 1e-6,
            "power law");
    require(fe.classification == RateClass::Exponential && std::abs(fe.exponential.rate - 0.02) < 1e-6 &&
                std::abs(fe.exponential.coefficient - 0.5) < 1e-6,
            "exponential");
    return std::string("within 1e-6");
  });

  return suite.take();
}

std::string format_checks(const std::vector<CheckResult>& checks) {
  std::size_t width = 5;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  std::ostringstream out;
  char line[64];
  std::size_t pass = 0, fail = 0, skip = 0;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%8.2fs  ", c.seconds);
    out << to_string(c.status) << "  " << c.name << std::string(width - c.name.size() + 2, ' ') << line << c.detail
        << "\n";
    pass += c.status == CheckStatus::Pass;
    fail += c.status == CheckStatus::Fail;
    skip += c.status == CheckStatus::Skip;
  }
  out << pass << " passed, " << fail << " failed, " << skip << " skipped\n";
  return out.str();
}

}  // namespace ermstab::cli
