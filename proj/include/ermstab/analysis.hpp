#pragma once

// Decay-rate fits of delta(m) series in log space and the power-law versus
// exponential classification.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace ermstab {

struct RatePoint {
  double m = 0.0;
  double delta = 0.0;
  std::optional<double> ci_lower;
  std::optional<double> ci_upper;
  bool exact = true;
};

/// Points with strictly increasing m.
struct RateSeries {
  std::vector<RatePoint> points;

  static RateSeries from_values(const std::vector<double>& m, const std::vector<double>& delta);

  /// Drops Monte Carlo points whose interval lower bound is zero.
  RateSeries fittable() const;
};

enum class Weighting { Unweighted, ConfidenceInterval };

/// delta ~ coefficient * m^{-exponent}; rss of log delta.
struct PowerFit {
  double coefficient = 0.0;
  double exponent = 0.0;
  double rss = 0.0;
};

/// delta ~ coefficient * exp(-rate * m); rss of log delta.
struct ExponentialFit {
  double coefficient = 0.0;
  double rate = 0.0;
  double rss = 0.0;
};

PowerFit fit_power(const RateSeries& series, Weighting weighting = Weighting::Unweighted);
ExponentialFit fit_exponential(const RateSeries& series, Weighting weighting = Weighting::Unweighted);

enum class RateClass { PowerLaw, Exponential, Inconclusive };
std::string_view to_string(RateClass c);

struct ClassifyConfig {
  double rss_ratio = 4.0;
  double min_exponent = 0.2;
  double max_exponent = 1.5;
  double min_span = 8.0;
  std::size_t min_points = 6;
  Weighting weighting = Weighting::Unweighted;
};

struct RateFit {
  PowerFit power;
  ExponentialFit exponential;
  RateClass classification = RateClass::Inconclusive;
  ClassifyConfig thresholds;
};

/// PowerLaw when the power-law rss is smaller by at least `rss_ratio` and
/// the exponent lies in [min_exponent, max_exponent]; Exponential when the
/// exponential rss is smaller by at least `rss_ratio`; otherwise
/// Inconclusive. Equal residuals (both zero) never count as "smaller".
RateFit classify(const RateSeries& series, const ClassifyConfig& config = {});

}  // namespace ermstab
