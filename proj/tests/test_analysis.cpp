#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "ermstab/analysis.hpp"
#include "ermstab/errors.hpp"
#include "ermstab/exact.hpp"

using namespace ermstab;

namespace {

RateSeries synthetic(const std::vector<double>& grid, const std::function<double(double)>& f) {
  std::vector<double> d;
  for (double m : grid) d.push_back(f(m));
  return RateSeries::from_values(grid, d);
}

RateSeries exact_series(const ScenarioSpec& spec, Notion n, const std::vector<double>& grid) {
  std::vector<double> d;
  for (double m : grid) d.push_back(exact_delta(spec, static_cast<std::size_t>(m), n, 0).value);
  return RateSeries::from_values(grid, d);
}

const std::vector<double> kGrid{10, 20, 40, 80, 160, 320};

ClassifyConfig five_points() {
  ClassifyConfig c;
  c.min_points = 5;
  return c;
}

}  // namespace

TEST_CASE("power-law fits recover exact parameters") {
  auto a = fit_power(synthetic(kGrid, [](double m) { return std::pow(m, -0.5); }));
  CHECK(a.exponent == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(a.coefficient == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.rss <= 1e-9);

  auto b = fit_power(synthetic({2, 3, 5, 8, 13}, [](double m) { return 3.0 * std::pow(m, -2.0); }));
  CHECK(b.exponent == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(b.coefficient == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("exponential fits recover exact parameters") {
  auto a = fit_exponential(synthetic(kGrid, [](double m) { return 0.5 * std::exp(-0.01 * m); }));
  CHECK(a.rate == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(a.coefficient == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(a.rss <= 1e-9);

  // 2 e^{-0.1 m}, kept below 1
  auto b = fit_exponential(synthetic({10, 20, 30, 40}, [](double m) { return 2.0 * std::exp(-0.1 * m); }));
  CHECK(b.rate == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(b.coefficient == doctest::Approx(2.0).epsilon(1e-9));

  auto flat = fit_exponential(synthetic({1, 2, 3, 4}, [](double) { return 0.3; }));
  CHECK(std::abs(flat.rate) <= 1e-12);
}

TEST_CASE("fits are scale-equivariant") {
  auto base = synthetic(kGrid, [](double m) { return 0.4 * std::pow(m, -0.7) * (1.0 + 0.1 * std::sin(m)); });
  auto scaled = base;
  for (auto& p : scaled.points) p.delta *= 0.25;
  const auto p0 = fit_power(base), p1 = fit_power(scaled);
  CHECK(p1.exponent == doctest::Approx(p0.exponent).epsilon(1e-12));
  CHECK(p1.coefficient == doctest::Approx(0.25 * p0.coefficient).epsilon(1e-12));
  const auto e0 = fit_exponential(base), e1 = fit_exponential(scaled);
  CHECK(e1.rate == doctest::Approx(e0.rate).epsilon(1e-12));
  CHECK(e1.coefficient == doctest::Approx(0.25 * e0.coefficient).epsilon(1e-12));
}

TEST_CASE("fit preconditions") {
  CHECK_THROWS_AS(fit_power(synthetic({1, 2, 3}, [](double) { return 0.5; })), ValidationError);
  CHECK_THROWS_AS(fit_power(RateSeries::from_values({1, 2, 3, 4}, {0.5, 0.0, 0.1, 0.1})), ValidationError);
  CHECK_THROWS_AS(fit_exponential(RateSeries::from_values({1, 3, 2, 4}, {0.5, 0.4, 0.3, 0.2})), ValidationError);
  CHECK_THROWS_AS(fit_exponential(RateSeries::from_values({1, 2, 3, 4}, {0.5, 1.5, 0.3, 0.2})), ValidationError);
  CHECK_THROWS_AS(RateSeries::from_values({1, 2}, {0.5}), ValidationError);
}

TEST_CASE("classification of synthetic series") {
  CHECK(classify(synthetic(kGrid, [](double m) { return std::pow(m, -0.5); })).classification == RateClass::PowerLaw);
  CHECK(classify(synthetic(kGrid, [](double m) { return std::exp(-m / 10.0); })).classification ==
        RateClass::Exponential);
  // an exact power law outside the exponent window
  CHECK(classify(synthetic(kGrid, [](double m) { return std::pow(m, -2.0); })).classification ==
        RateClass::Inconclusive);

  CHECK_THROWS_AS(classify(synthetic({10, 20, 30, 40, 50, 60}, [](double m) { return std::pow(m, -0.5); })),
                  ValidationError);
  CHECK_THROWS_AS(classify(synthetic({10, 20, 40, 80, 160}, [](double m) { return std::pow(m, -0.5); })),
                  ValidationError);
  const auto fit = classify(synthetic(kGrid, [](double m) { return std::pow(m, -0.5); }));
  CHECK(fit.thresholds.rss_ratio == 4.0);
  CHECK(fit.thresholds.min_span == 8.0);
}

TEST_CASE("Monte Carlo points with a zero lower bound are dropped") {
  RateSeries s;
  s.points.push_back({10, 0.1, 0.05, 0.15, false});
  s.points.push_back({20, 0.0, 0.0, 0.01, false});
  s.points.push_back({40, 0.05, std::nullopt, std::nullopt, true});
  auto f = s.fittable();
  REQUIRE(f.points.size() == 2);
  CHECK(f.points[1].m == 40);
}

TEST_CASE("interval weighting favours tight points") {
  RateSeries s = synthetic(kGrid, [](double m) { return std::pow(m, -0.5); });
  for (auto& p : s.points) {
    p.exact = false;
    p.ci_lower = p.delta * 0.9;
    p.ci_upper = p.delta * 1.1;
  }
  s.points[0].delta *= 2.0;  // an outlier with a very wide interval
  s.points[0].ci_lower = s.points[0].delta * 0.01;
  s.points[0].ci_upper = s.points[0].delta * 3.0;
  const auto plain = fit_power(s);
  const auto weighted = fit_power(s, Weighting::ConfidenceInterval);
  CHECK(std::abs(weighted.exponent - 0.5) < std::abs(plain.exponent - 0.5));
}

TEST_CASE("classification of exact stability series") {
  const std::vector<double> grid{25, 50, 100, 200, 400};
  auto cv = classify(exact_series(two_constant(Rational(1, 2)), Notion::CV, grid), five_points());
  CHECK(cv.classification == RateClass::PowerLaw);
  CHECK(cv.power.exponent >= 0.4);
  CHECK(cv.power.exponent <= 0.6);

  auto weak = exact_series(two_constant(Rational(7, 10)), Notion::WeakHypothesis, grid);
  CHECK(classify(weak, five_points()).classification == RateClass::Exponential);
  const double e = (2.0 - 1.0 / 0.7) * (2.0 - 1.0 / 0.7) / 8.0;
  CHECK(fit_exponential(weak).rate >= 0.9 * e);

  std::vector<double> phase_grid;
  for (int m = 20; m <= 200; m += 20) phase_grid.push_back(m);
  auto th = classify(exact_series(three_hyp_two_min(), Notion::CV, phase_grid));
  CHECK(th.classification == RateClass::PowerLaw);

  auto unique = classify(exact_series(unique_min(Rational(1, 5)), Notion::WeakHypothesis, {50, 100, 150, 200, 300, 400}));
  CHECK(unique.classification == RateClass::Exponential);
  CHECK(unique.exponential.rate > 0);
}
