#pragma once

// Monte Carlo estimation of delta(m) with Wilson score intervals. Every trial
// owns a generator seeded from (master seed, m, trial index), so estimates do
// not depend on how trials are split across workers.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ermstab/rational.hpp"
#include "ermstab/resample.hpp"
#include "ermstab/scenarios.hpp"

namespace ermstab {

/// SplitMix64 finalizer (Stafford variant 13).
std::uint64_t mix64(std::uint64_t z);

/// Per-trial seed: mix64(master ^ mix64(m + c1) ^ mix64(trial + c2)) with
/// c1, c2 distinct odd constants, then finalized once more.
std::uint64_t trial_seed(std::uint64_t master, std::size_t m, std::uint64_t trial);

/// SplitMix64 generator; one per trial.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform integer in [0, bound) by rejection; bound >= 1.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t state_;
};

enum class IPolicy { Fixed, Uniform };
std::string_view to_string(IPolicy p);
IPolicy parse_i_policy(std::string_view text);

/// Inverse-CDF sampler over the atoms of a distribution. Uses exact integer
/// numerators when the common denominator fits in 63 bits, floats otherwise.
class AtomSampler {
 public:
  explicit AtomSampler(const FiniteDistribution& dist);
  std::size_t operator()(SplitMix64& rng) const;

 private:
  std::uint64_t denominator_ = 0;
  std::vector<std::uint64_t> cumulative_int_;
  std::vector<double> cumulative_float_;
};

/// Draws S (m examples) then U i.i.d. from the distribution; with the
/// Uniform policy the position i is drawn last, otherwise i = m.
ReplacementDraw sample_draw(const FiniteDistribution& dist, std::size_t m, std::uint64_t seed,
                            IPolicy policy = IPolicy::Fixed);

struct McConfig {
  std::uint64_t trials = 100000;
  std::uint64_t master_seed = 1;
  std::size_t workers = 1;
  Notion notion = Notion::CV;
  Rational beta = 0;
  IPolicy i_policy = IPolicy::Fixed;
};

enum class Provenance { Exact, MonteCarlo };
std::string_view to_string(Provenance p);

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
  double half_width() const { return 0.5 * (upper - lower); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline constexpr double kWilsonZ95 = 1.959963984540054;
inline constexpr std::string_view kIntervalMethod = "wilson-95";

/// Wilson score interval for `successes` out of `trials`.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kWilsonZ95);

struct StabilityEstimate {
  std::size_t m = 0;
  Notion notion = Notion::CV;
  Rational beta;
  double delta_hat = 0.0;
  Interval ci;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  IPolicy i_policy = IPolicy::Fixed;
  Provenance provenance = Provenance::MonteCarlo;

  friend bool operator==(const StabilityEstimate&, const StabilityEstimate&) = default;
};

StabilityEstimate estimate_delta(const ScenarioSpec& scenario, std::size_t m, const McConfig& config);

/// One estimate per grid value; the grid must be nonempty and strictly increasing.
std::vector<StabilityEstimate> sweep(const ScenarioSpec& scenario, std::span<const std::size_t> grid,
                                     const McConfig& config);

}  // namespace ermstab
