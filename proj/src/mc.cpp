#include "ermstab/mc.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ermstab/errors.hpp"

namespace ermstab {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t m, std::uint64_t trial) {
  constexpr std::uint64_t kM = 0x9e3779b97f4a7c15ULL;
  constexpr std::uint64_t kTrial = 0xd1b54a32d192ed03ULL;
  return mix64(master ^ mix64(static_cast<std::uint64_t>(m) + kM) ^ mix64(trial + kTrial));
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  // reject the top partial block so every residue is equally likely
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % bound;
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::string_view to_string(IPolicy p) { return p == IPolicy::Fixed ? "fixed" : "uniform"; }

IPolicy parse_i_policy(std::string_view text) {
  if (text == "fixed") return IPolicy::Fixed;
  if (text == "uniform") return IPolicy::Uniform;
  throw ValidationError("unknown i policy '" + std::string(text) + "' (expected fixed|uniform)");
}

std::string_view to_string(Provenance p) { return p == Provenance::Exact ? "exact" : "mc"; }

AtomSampler::AtomSampler(const FiniteDistribution& dist) {
  std::vector<Rational> w;
  for (const auto& a : dist.atoms()) w.push_back(a.weight);
  BigInt den = common_denominator(w);
  if (mpz_sizeinbase(den.get_mpz_t(), 2) <= 63) {
    denominator_ = den.get_ui();
    std::uint64_t acc = 0;
    for (const auto& q : w) {
      acc += BigInt(q.get_num() * (den / q.get_den())).get_ui();
      cumulative_int_.push_back(acc);
    }
  } else {
    double acc = 0.0;
    for (double x : dist.weights()) {
      acc += x;
      cumulative_float_.push_back(acc);
    }
  }
}

std::size_t AtomSampler::operator()(SplitMix64& rng) const {
  if (denominator_ != 0) {
    const std::uint64_t v = rng.below(denominator_);
    auto it = std::upper_bound(cumulative_int_.begin(), cumulative_int_.end(), v);
    return static_cast<std::size_t>(it - cumulative_int_.begin());
  }
  const double v = rng.uniform();
  auto it = std::upper_bound(cumulative_float_.begin(), cumulative_float_.end(), v);
  return std::min(static_cast<std::size_t>(it - cumulative_float_.begin()), cumulative_float_.size() - 1);
}

namespace {

void draw_into(ReplacementDraw& draw, const FiniteDistribution& dist, const AtomSampler& sampler, std::size_t m,
               std::uint64_t seed, IPolicy policy) {
  SplitMix64 rng(seed);
  draw.s.items.resize(m);
  for (std::size_t k = 0; k < m; ++k) draw.s.items[k] = dist.atom(sampler(rng)).z;
  draw.u = dist.atom(sampler(rng)).z;
  draw.i = policy == IPolicy::Fixed ? m : static_cast<std::size_t>(rng.below(m)) + 1;
}

}  // namespace

ReplacementDraw sample_draw(const FiniteDistribution& dist, std::size_t m, std::uint64_t seed, IPolicy policy) {
  if (m < 1) throw ValidationError("sample size must be at least 1");
  ReplacementDraw draw;
  draw_into(draw, dist, AtomSampler(dist), m, seed, policy);
  return draw;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw ValidationError("Wilson interval needs at least one trial");
  if (successes > trials) throw ValidationError("more successes than trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  Interval ci{std::clamp(center - half, 0.0, p), std::clamp(center + half, p, 1.0)};
  if (successes == 0) ci.lower = 0.0;
  if (successes == trials) ci.upper = 1.0;
  return ci;
}

StabilityEstimate estimate_delta(const ScenarioSpec& scenario, std::size_t m, const McConfig& config) {
  if (m < 2) throw ValidationError("delta(m) needs m >= 2; got m = " + std::to_string(m));
  if (config.trials < 1) throw ValidationError("at least one trial is required");
  validate_beta(config.beta);

  const AtomSampler sampler(scenario.dist);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::uint64_t>(config.workers, config.trials));
  std::vector<std::uint64_t> hits(workers, 0);

  auto run = [&](std::size_t w) {
    const std::uint64_t begin = config.trials * w / workers;
    const std::uint64_t end = config.trials * (w + 1) / workers;
    ReplacementDraw draw;
    std::uint64_t local = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      draw_into(draw, scenario.dist, sampler, m, trial_seed(config.master_seed, m, t), config.i_policy);
      if (discrepancy(config.notion, draw, scenario.space, config.beta)) ++local;
    }
    hits[w] = local;
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  StabilityEstimate est;
  est.m = m;
  est.notion = config.notion;
  est.beta = config.beta;
  for (auto h : hits) est.successes += h;
  est.trials = config.trials;
  est.delta_hat = static_cast<double>(est.successes) / static_cast<double>(est.trials);
  est.ci = wilson_interval(est.successes, est.trials);
  est.seed = config.master_seed;
  est.i_policy = config.i_policy;
  est.provenance = Provenance::MonteCarlo;
  return est;
}

std::vector<StabilityEstimate> sweep(const ScenarioSpec& scenario, std::span<const std::size_t> grid,
                                     const McConfig& config) {
  if (grid.empty()) throw ValidationError("m grid must be nonempty");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (grid[k] <= grid[k - 1]) throw ValidationError("m grid must be strictly increasing (no duplicates)");
  }
  std::vector<StabilityEstimate> out;
  out.reserve(grid.size());
  for (auto m : grid) out.push_back(estimate_delta(scenario, m, config));
  return out;
}

}  // namespace ermstab
