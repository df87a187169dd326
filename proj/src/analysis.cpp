#include "ermstab/analysis.hpp"

#include <cmath>

#include "ermstab/errors.hpp"

namespace ermstab {

RateSeries RateSeries::from_values(const std::vector<double>& m, const std::vector<double>& delta) {
  if (m.size() != delta.size()) throw ValidationError("m and delta columns differ in length");
  RateSeries s;
  for (std::size_t k = 0; k < m.size(); ++k) s.points.push_back({m[k], delta[k], std::nullopt, std::nullopt, true});
  return s;
}

RateSeries RateSeries::fittable() const {
  RateSeries s;
  for (const auto& p : points) {
    if (!p.exact && p.ci_lower && *p.ci_lower <= 0.0) continue;
    s.points.push_back(p);
  }
  return s;
}

namespace {

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
  double rss = 0.0;
};

void validate(const RateSeries& series) {
  if (series.points.size() < 4) {
    throw ValidationError("rate fit needs at least 4 points; got " + std::to_string(series.points.size()));
  }
  for (std::size_t k = 0; k < series.points.size(); ++k) {
    const auto& p = series.points[k];
    if (!(p.delta > 0.0) || p.delta > 1.0) {
      throw ValidationError("delta must lie in (0, 1] for a log-space fit; got " + std::to_string(p.delta) +
                            " at m = " + std::to_string(p.m));
    }
    if (!(p.m > 0.0)) throw ValidationError("m must be positive");
    if (k > 0 && !(p.m > series.points[k - 1].m)) throw ValidationError("m must be strictly increasing");
  }
}

/// Inverse variance of log delta from a 95% interval, by the delta method.
double log_weight(const RatePoint& p, Weighting weighting) {
  if (weighting == Weighting::Unweighted || !p.ci_lower || !p.ci_upper) return 1.0;
  const double sd = (*p.ci_upper - *p.ci_lower) / (2.0 * 1.959963984540054);
  if (!(sd > 0.0)) return 1.0;
  const double log_sd = sd / p.delta;
  return 1.0 / (log_sd * log_sd);
}

Line least_squares(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sw += w[k];
    sx += w[k] * x[k];
    sy += w[k] * y[k];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += w[k] * (x[k] - mx) * (x[k] - mx);
    sxy += w[k] * (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("rate fit needs at least two distinct m values");
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (l.intercept + l.slope * x[k]);
    l.rss += w[k] * r * r;
  }
  return l;
}

Line fit_log(const RateSeries& series, Weighting weighting, bool log_x) {
  validate(series);
  std::vector<double> x, y, w;
  for (const auto& p : series.points) {
    x.push_back(log_x ? std::log(p.m) : p.m);
    y.push_back(std::log(p.delta));
    w.push_back(log_weight(p, weighting));
  }
  return least_squares(x, y, w);
}

}  // namespace

PowerFit fit_power(const RateSeries& series, Weighting weighting) {
  Line l = fit_log(series, weighting, true);
  return {std::exp(l.intercept), -l.slope, l.rss};
}

ExponentialFit fit_exponential(const RateSeries& series, Weighting weighting) {
  Line l = fit_log(series, weighting, false);
  return {std::exp(l.intercept), -l.slope, l.rss};
}

std::string_view to_string(RateClass c) {
  switch (c) {
    case RateClass::PowerLaw: return "PowerLaw";
    case RateClass::Exponential: return "Exponential";
    case RateClass::Inconclusive: return "Inconclusive";
  }
  return "?";
}

RateFit classify(const RateSeries& series, const ClassifyConfig& config) {
  if (series.points.size() < config.min_points) {
    throw ValidationError("classification needs at least " + std::to_string(config.min_points) + " points; got " +
                          std::to_string(series.points.size()));
  }
  const double span = series.points.back().m / series.points.front().m;
  if (!(span >= config.min_span)) {
    throw ValidationError("classification needs m to span a factor of at least " + std::to_string(config.min_span) +
                          "; got " + std::to_string(span));
  }
  RateFit fit;
  fit.thresholds = config;
  fit.power = fit_power(series, config.weighting);
  fit.exponential = fit_exponential(series, config.weighting);
  const double rp = fit.power.rss;
  const double re = fit.exponential.rss;
  const bool power_better = re > rp && re >= config.rss_ratio * rp;
  const bool exp_better = rp > re && rp >= config.rss_ratio * re;
  if (power_better && fit.power.exponent >= config.min_exponent && fit.power.exponent <= config.max_exponent) {
    fit.classification = RateClass::PowerLaw;
  } else if (exp_better) {
    fit.classification = RateClass::Exponential;
  } else {
    fit.classification = RateClass::Inconclusive;
  }
  return fit;
}

}  // namespace ermstab
