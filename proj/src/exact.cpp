#include "ermstab/exact.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>

#include "ermstab/errors.hpp"

namespace ermstab {

std::string_view to_string(Arithmetic a) { return a == Arithmetic::Rational ? "rational" : "float"; }

std::string_view to_string(Enumeration e) {
  switch (e) {
    case Enumeration::Auto: return "auto";
    case Enumeration::CountVectors: return "count-vectors";
    case Enumeration::RiskLattice: return "risk-lattice";
    case Enumeration::Sequences: return "sequences";
  }
  return "?";
}

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double log_pow(double x, std::size_t k) {
  if (k == 0) return 0.0;
  if (x == 0.0) return -INFINITY;
  return static_cast<double>(k) * std::log(x);
}

BigInt pow(const BigInt& base, std::size_t e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

/// Integer numerators of the class weights over their common denominator.
struct IntegerWeights {
  BigInt denominator;
  std::vector<BigInt> numerators;
};

IntegerWeights integer_weights(const std::vector<Rational>& weights) {
  IntegerWeights w{common_denominator(weights), {}};
  for (const auto& q : weights) w.numerators.push_back(BigInt(q.get_num() * (w.denominator / q.get_den())));
  return w;
}

std::vector<double> float_weights(const std::vector<Rational>& weights) {
  std::vector<double> out;
  for (const auto& q : weights) out.push_back(to_double(q));
  return out;
}

/// Smallest |K_a - K_b| on the m-1 retained examples for which the overlap
/// discrepancy exceeds beta, i.e. floor(beta * (m-1)) + 1.
long overlap_threshold(const Rational& beta, std::size_t m) {
  BigInt scaled = beta.get_num() * static_cast<unsigned long>(m - 1);
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), beta.get_den().get_mpz_t());
  return q.get_si() + 1;
}

/// Evaluates the discrepancy indicator for every (Z_i class, U class) pair,
/// given the empirical-risk differences of the retained sample.
class Kernel {
 public:
  Kernel(const PatternTable& table, const HypothesisSpace& space, Notion notion, const Rational& beta,
         std::size_t m)
      : table_(table),
        notion_(notion),
        unit_fires_(Rational(1) > beta),
        overlap_threshold_(overlap_threshold(beta, m)),
        choice_(table.classes()) {
    const std::size_t h = table.hypothesis_count;
    weak_gap_.assign(h, std::vector<std::uint8_t>(h, 0));
    for (std::size_t a = 0; a < h; ++a) {
      for (std::size_t b = 0; b < h; ++b) {
        weak_gap_[a][b] = static_cast<std::uint8_t>(max_loss_gap(space[a], space[b]));
      }
    }
  }

  /// `diff[h]` = K_h - K_0 on S^i (diff[0] == 0). Calls `emit(a, b)` for
  /// every class pair whose draw fires the indicator.
  template <class Emit>
  void for_each_firing(const std::vector<long>& diff, Emit&& emit) {
    const std::size_t d = table_.classes();
    const std::size_t hs = table_.hypothesis_count;
    for (std::size_t c = 0; c < d; ++c) {
      const auto& l = table_.losses[c];
      std::size_t best = 0;
      long best_v = diff[0] + l[0];
      for (std::size_t h = 1; h < hs; ++h) {
        long v = diff[h] + l[h];
        if (v < best_v) {
          best = h;
          best_v = v;
        }
      }
      choice_[c] = best;
    }
    for (std::size_t a = 0; a < d; ++a) {
      const std::size_t fs = choice_[a];
      for (std::size_t b = 0; b < d; ++b) {
        const std::size_t fr = choice_[b];
        if (fires(diff, fs, fr, b)) emit(a, b);
      }
    }
  }

 private:
  bool fires(const std::vector<long>& diff, std::size_t fs, std::size_t fr, std::size_t u_class) const {
    auto cv = [&] { return unit_fires_ && table_.losses[u_class][fs] != table_.losses[u_class][fr]; };
    auto overlap = [&] { return fs != fr && std::labs(diff[fs] - diff[fr]) >= overlap_threshold_; };
    switch (notion_) {
      case Notion::WeakHypothesis: return unit_fires_ && weak_gap_[fs][fr] != 0;
      case Notion::CV: return cv();
      case Notion::Overlap: return overlap();
      case Notion::Training: return cv() || overlap();
    }
    return false;
  }

  const PatternTable& table_;
  Notion notion_;
  bool unit_fires_;
  long overlap_threshold_;
  std::vector<std::vector<std::uint8_t>> weak_gap_;
  std::vector<std::size_t> choice_;
};

/// Dense box holding every reachable vector of differences K_h - K_0 after
/// a fixed number of draws.
struct Lattice {
  std::size_t dims = 0;
  std::vector<long> lower;
  std::vector<std::size_t> extent;
  std::vector<std::size_t> stride;
  std::vector<std::ptrdiff_t> class_offset;
  std::size_t origin = 0;
  double cells = 1.0;

  void decode(std::size_t index, std::vector<long>& diff) const {
    diff[0] = 0;
    for (std::size_t j = 0; j < dims; ++j) {
      diff[j + 1] = lower[j] + static_cast<long>((index / stride[j]) % extent[j]);
    }
  }
};

Lattice make_lattice(const PatternTable& table, std::size_t steps) {
  Lattice lat;
  lat.dims = table.hypothesis_count - 1;
  std::vector<std::vector<int>> step(table.classes(), std::vector<int>(lat.dims));
  for (std::size_t c = 0; c < table.classes(); ++c) {
    for (std::size_t j = 0; j < lat.dims; ++j) step[c][j] = table.losses[c][j + 1] - table.losses[c][0];
  }
  std::size_t stride = 1;
  for (std::size_t j = 0; j < lat.dims; ++j) {
    int lo = 0, hi = 0;
    for (std::size_t c = 0; c < table.classes(); ++c) {
      lo = std::min(lo, step[c][j]);
      hi = std::max(hi, step[c][j]);
    }
    lat.lower.push_back(static_cast<long>(steps) * lo);
    std::size_t ext = steps * static_cast<std::size_t>(hi - lo) + 1;
    lat.extent.push_back(ext);
    lat.stride.push_back(stride);
    lat.cells *= static_cast<double>(ext);
    stride *= ext;
  }
  for (std::size_t c = 0; c < table.classes(); ++c) {
    std::ptrdiff_t off = 0;
    for (std::size_t j = 0; j < lat.dims; ++j) off += step[c][j] * static_cast<std::ptrdiff_t>(lat.stride[j]);
    lat.class_offset.push_back(off);
  }
  for (std::size_t j = 0; j < lat.dims; ++j) lat.origin += static_cast<std::size_t>(-lat.lower[j]) * lat.stride[j];
  return lat;
}

bool is_zero(double v) { return v == 0.0; }
bool is_zero(const BigInt& v) { return sgn(v) == 0; }

/// Distribution of the difference vector after `steps` i.i.d. draws, with
/// weights `w` per class (unnormalized integers or float probabilities).
template <class V, class W>
std::vector<V> propagate(const Lattice& lat, const std::vector<W>& w, std::size_t steps) {
  const auto cells = static_cast<std::size_t>(lat.cells);
  std::vector<V> cur(cells, V(0));
  std::vector<V> next(cells, V(0));
  cur[lat.origin] = V(1);
  for (std::size_t t = 0; t < steps; ++t) {
    for (auto& v : next) v = 0;
    for (std::size_t idx = 0; idx < cells; ++idx) {
      if (is_zero(cur[idx])) continue;
      for (std::size_t c = 0; c < w.size(); ++c) {
        next[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(idx) + lat.class_offset[c])] += cur[idx] * w[c];
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

double count_vector_total(std::size_t n, std::size_t d) {
  return to_double(Rational(binomial(static_cast<unsigned long>(n + d - 1), static_cast<unsigned long>(d - 1))));
}

/// Calls visit(counts) for every composition of n into counts.size() parts.
void for_each_composition(std::vector<std::size_t>& counts, std::size_t pos, std::size_t remaining,
                          const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (pos + 1 == counts.size()) {
    counts[pos] = remaining;
    visit(counts);
    return;
  }
  for (std::size_t k = 0; k <= remaining; ++k) {
    counts[pos] = k;
    for_each_composition(counts, pos + 1, remaining - k, visit);
  }
}

PatternTable table_for(const ScenarioSpec& s, bool reduce) {
  return reduce ? loss_pattern_reduce(s.dist, s.space) : identity_patterns(s.dist, s.space);
}

void check_cap(double size, double cap, std::string_view what) {
  if (size > cap) {
    throw CapExceeded(std::string(what) + " enumeration of " + std::to_string(size) + " items exceeds the cap of " +
                          std::to_string(cap) + "; use the Monte Carlo engine",
                      size, cap);
  }
}

ExactResult finish(ExactResult r, const BigInt* total, const BigInt* denominator, double float_value) {
  if (r.arithmetic == Arithmetic::Rational) {
    Rational q(*total, *denominator);
    q.canonicalize();
    r.value = to_double(q);
    r.exact = std::move(q);
  } else {
    r.value = float_value;
  }
  return r;
}

ExactResult run_count_vectors(const ScenarioSpec& s, const PatternTable& table, ExactResult r) {
  const std::size_t n = r.m - 1;
  const std::size_t d = table.classes();
  const std::size_t hs = table.hypothesis_count;
  Kernel kernel(table, s.space, r.notion, r.beta, r.m);
  std::vector<long> diff(hs);
  std::vector<std::size_t> counts(d);

  auto set_diff = [&](const std::vector<std::size_t>& cnt) {
    for (std::size_t h = 0; h < hs; ++h) {
      long k = 0;
      for (std::size_t c = 0; c < d; ++c) k += static_cast<long>(cnt[c]) * (table.losses[c][h] - table.losses[c][0]);
      diff[h] = k;
    }
  };

  if (r.arithmetic == Arithmetic::Rational) {
    auto iw = integer_weights(table.weights);
    std::vector<BigInt> factorial(n + 1);
    factorial[0] = 1;
    for (std::size_t k = 1; k <= n; ++k) factorial[k] = factorial[k - 1] * static_cast<unsigned long>(k);
    BigInt total = 0;
    for_each_composition(counts, 0, n, [&](const std::vector<std::size_t>& cnt) {
      set_diff(cnt);
      BigInt pair_mass = 0;
      kernel.for_each_firing(diff, [&](std::size_t a, std::size_t b) { pair_mass += iw.numerators[a] * iw.numerators[b]; });
      if (sgn(pair_mass) == 0) return;
      BigInt weight = factorial[n];
      for (std::size_t c = 0; c < d; ++c) {
        weight /= factorial[cnt[c]];
      }
      for (std::size_t c = 0; c < d; ++c) weight *= pow(iw.numerators[c], cnt[c]);
      total += weight * pair_mass;
    });
    BigInt den = pow(iw.denominator, r.m + 1);
    return finish(std::move(r), &total, &den, 0.0);
  }

  auto w = float_weights(table.weights);
  const double log_n_factorial = std::lgamma(static_cast<double>(n) + 1.0);
  CompensatedSum sum;
  for_each_composition(counts, 0, n, [&](const std::vector<std::size_t>& cnt) {
    set_diff(cnt);
    double pair_mass = 0.0;
    kernel.for_each_firing(diff, [&](std::size_t a, std::size_t b) { pair_mass += w[a] * w[b]; });
    if (pair_mass == 0.0) return;
    double log_pmf = log_n_factorial;
    for (std::size_t c = 0; c < d; ++c) {
      log_pmf += log_pow(w[c], cnt[c]) - std::lgamma(static_cast<double>(cnt[c]) + 1.0);
    }
    sum.add(std::exp(log_pmf) * pair_mass);
  });
  return finish(std::move(r), nullptr, nullptr, sum.value());
}

ExactResult run_lattice(const ScenarioSpec& s, const PatternTable& table, ExactResult r) {
  const std::size_t steps = r.m - 1;
  const std::size_t hs = table.hypothesis_count;
  Lattice lat = make_lattice(table, steps);
  Kernel kernel(table, s.space, r.notion, r.beta, r.m);
  std::vector<long> diff(hs);
  const auto cells = static_cast<std::size_t>(lat.cells);

  if (r.arithmetic == Arithmetic::Rational) {
    auto iw = integer_weights(table.weights);
    auto dist = propagate<BigInt>(lat, iw.numerators, steps);
    BigInt total = 0;
    for (std::size_t idx = 0; idx < cells; ++idx) {
      if (sgn(dist[idx]) == 0) continue;
      lat.decode(idx, diff);
      BigInt pair_mass = 0;
      kernel.for_each_firing(diff, [&](std::size_t a, std::size_t b) { pair_mass += iw.numerators[a] * iw.numerators[b]; });
      total += dist[idx] * pair_mass;
    }
    BigInt den = pow(iw.denominator, r.m + 1);
    return finish(std::move(r), &total, &den, 0.0);
  }

  auto w = float_weights(table.weights);
  auto dist = propagate<double>(lat, w, steps);
  CompensatedSum sum;
  for (std::size_t idx = 0; idx < cells; ++idx) {
    if (dist[idx] == 0.0) continue;
    lat.decode(idx, diff);
    double pair_mass = 0.0;
    kernel.for_each_firing(diff, [&](std::size_t a, std::size_t b) { pair_mass += w[a] * w[b]; });
    if (pair_mass != 0.0) sum.add(dist[idx] * pair_mass);
  }
  return finish(std::move(r), nullptr, nullptr, sum.value());
}

ExactResult run_sequences(const ScenarioSpec& s, ExactResult r) {
  const std::size_t atoms = s.dist.size();
  const std::size_t len = r.m + 1;
  std::vector<Rational> weights;
  for (const auto& a : s.dist.atoms()) weights.push_back(a.weight);
  auto iw = integer_weights(weights);
  const auto& fw = s.dist.weights();

  std::vector<std::size_t> idx(len, 0);
  BigInt total = 0;
  CompensatedSum sum;
  ReplacementDraw draw;
  draw.s.items.resize(r.m);
  draw.i = r.position;
  while (true) {
    for (std::size_t k = 0; k < r.m; ++k) draw.s.items[k] = s.dist.atom(idx[k]).z;
    draw.u = s.dist.atom(idx[r.m]).z;
    if (discrepancy(r.notion, draw, s.space, r.beta)) {
      if (r.arithmetic == Arithmetic::Rational) {
        BigInt w = 1;
        for (auto k : idx) w *= iw.numerators[k];
        total += w;
      } else {
        double w = 1.0;
        for (auto k : idx) w *= fw[k];
        sum.add(w);
      }
    }
    std::size_t k = 0;
    while (k < len && ++idx[k] == atoms) idx[k++] = 0;
    if (k == len) break;
  }
  BigInt den = pow(iw.denominator, len);
  return finish(std::move(r), &total, &den, sum.value());
}

}  // namespace

double enumeration_size(const ScenarioSpec& scenario, std::size_t m, Enumeration strategy, bool reduce) {
  if (m < 2) throw ValidationError("delta(m) needs m >= 2");
  switch (strategy) {
    case Enumeration::Sequences:
      return std::pow(static_cast<double>(scenario.dist.size()), static_cast<double>(m + 1));
    case Enumeration::CountVectors:
      return count_vector_total(m - 1, table_for(scenario, reduce).classes());
    case Enumeration::RiskLattice:
      return make_lattice(table_for(scenario, reduce), m - 1).cells;
    case Enumeration::Auto:
      return std::min(enumeration_size(scenario, m, Enumeration::CountVectors, reduce),
                      enumeration_size(scenario, m, Enumeration::RiskLattice, reduce));
  }
  return 0.0;
}

Enumeration resolve_enumeration(const ScenarioSpec& scenario, std::size_t m, const ExactOptions& options) {
  if (options.position && *options.position != m) return Enumeration::Sequences;
  if (options.enumeration != Enumeration::Auto) return options.enumeration;
  double cv = enumeration_size(scenario, m, Enumeration::CountVectors, options.reduce);
  double lat = enumeration_size(scenario, m, Enumeration::RiskLattice, options.reduce);
  return cv <= lat ? Enumeration::CountVectors : Enumeration::RiskLattice;
}

ExactResult exact_delta(const ScenarioSpec& scenario, std::size_t m, Notion notion, const Rational& beta,
                        const ExactOptions& options) {
  if (m < 2) throw ValidationError("delta(m) needs m >= 2; got m = " + std::to_string(m));
  validate_beta(beta);
  ExactResult r;
  r.m = m;
  r.notion = notion;
  r.beta = beta;
  r.position = options.position.value_or(m);
  if (r.position < 1 || r.position > m) {
    throw ValidationError("position " + std::to_string(r.position) + " outside [1, " + std::to_string(m) + "]");
  }
  r.arithmetic = options.arithmetic;
  r.enumeration = resolve_enumeration(scenario, m, options);
  r.enumeration_size = enumeration_size(scenario, m, r.enumeration, options.reduce);
  check_cap(r.enumeration_size, options.cap, to_string(r.enumeration));

  switch (r.enumeration) {
    case Enumeration::Sequences: return run_sequences(scenario, std::move(r));
    case Enumeration::CountVectors: return run_count_vectors(scenario, table_for(scenario, options.reduce), std::move(r));
    case Enumeration::RiskLattice: return run_lattice(scenario, table_for(scenario, options.reduce), std::move(r));
    case Enumeration::Auto: break;
  }
  throw Error("unresolved enumeration strategy");
}

ExactResult exact_delta_two_class(const Rational& p, std::size_t m, Notion notion, const Rational& beta,
                                  Arithmetic arithmetic) {
  if (p < 0 || p > 1) throw ValidationError("p must lie in [0, 1]; got " + to_string(p));
  if (m < 2) throw ValidationError("delta(m) needs m >= 2; got m = " + std::to_string(m));
  validate_beta(beta);
  const std::size_t n = m - 1;
  const bool unit_fires = Rational(1) > beta;
  const long threshold = overlap_threshold(beta, m);

  // k positives among the n retained draws; z_plus / u_plus say whether the
  // replaced example and the replacement are positive. h_plus (index 0)
  // errs on negatives and wins ties.
  auto fires = [&](std::size_t k, bool z_plus, bool u_plus) {
    auto choose = [&](bool extra_plus) {
      std::size_t pos = k + (extra_plus ? 1 : 0);
      std::size_t neg = m - pos;
      return neg <= pos ? 0 : 1;
    };
    const bool switched = choose(z_plus) != choose(u_plus);
    const bool cv = unit_fires && switched;
    const bool overlap = switched && std::labs(static_cast<long>(n) - 2 * static_cast<long>(k)) >= threshold;
    switch (notion) {
      case Notion::WeakHypothesis:
      case Notion::CV: return cv;
      case Notion::Overlap: return overlap;
      case Notion::Training: return cv || overlap;
    }
    return false;
  };

  ExactResult r;
  r.m = m;
  r.notion = notion;
  r.beta = beta;
  r.position = m;
  r.arithmetic = arithmetic;
  r.enumeration = Enumeration::CountVectors;
  r.enumeration_size = static_cast<double>(n + 1);

  if (arithmetic == Arithmetic::Rational) {
    const BigInt den = p.get_den();
    const BigInt plus = p.get_num();
    const BigInt minus = den - plus;
    BigInt total = 0;
    for (std::size_t k = 0; k <= n; ++k) {
      BigInt pair = 0;
      for (bool z : {true, false}) {
        for (bool u : {true, false}) {
          if (fires(k, z, u)) pair += (z ? plus : minus) * (u ? plus : minus);
        }
      }
      if (sgn(pair) == 0) continue;
      total += binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(k)) * pow(plus, k) * pow(minus, n - k) * pair;
    }
    BigInt d = pow(den, m + 1);
    return finish(std::move(r), &total, &d, 0.0);
  }

  const double pf = to_double(p);
  const double qf = to_double(Rational(1 - p));
  CompensatedSum sum;
  for (std::size_t k = 0; k <= n; ++k) {
    double pair = 0.0;
    for (bool z : {true, false}) {
      for (bool u : {true, false}) {
        if (fires(k, z, u)) pair += (z ? pf : qf) * (u ? pf : qf);
      }
    }
    if (pair == 0.0) continue;
    double log_pmf = std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
                     std::lgamma(static_cast<double>(n - k) + 1.0) + log_pow(pf, k) + log_pow(qf, n - k);
    sum.add(std::exp(log_pmf) * pair);
  }
  return finish(std::move(r), nullptr, nullptr, sum.value());
}

ConditionalSwitch conditional_switch_probability(const ScenarioSpec& scenario, std::size_t m, TieRule tie) {
  if (m < 2) throw ValidationError("conditional switch probability needs m >= 2");
  if (!scenario.pair) {
    throw ValidationError("conditional switch probability needs exactly two risk minimizers; scenario '" +
                          scenario.name + "' has " + std::to_string(scenario.minimizers().indices.size()));
  }
  const std::size_t hstar[] = {scenario.pair->first, scenario.pair->second};
  PatternTable table = restrict_patterns(loss_pattern_reduce(scenario.dist, scenario.space), hstar);
  auto iw = integer_weights(table.weights);
  const std::size_t steps = m - 1;
  Lattice lat = make_lattice(table, steps);
  auto dist = propagate<BigInt>(lat, iw.numerators, steps);

  // +1 on Z1 (h1 strictly better), -1 on Z2, 0 elsewhere.
  std::vector<int> side(table.classes());
  for (std::size_t c = 0; c < table.classes(); ++c) side[c] = table.losses[c][1] - table.losses[c][0];

  // diff = K_2 - K_1 on the sample including the example of class c at the
  // replaced position; returns 0 for h1 and 1 for h2.
  auto choose = [&](long diff, std::size_t c) -> int {
    if (diff > 0) return 0;
    if (diff < 0) return 1;
    if (tie == TieRule::IndexOrder) return 0;
    return table.losses[c][0] == 1 ? 0 : 1;
  };

  BigInt joint = 0;
  BigInt conditioning = 0;
  std::vector<long> diff(2);
  for (std::size_t idx = 0; idx < dist.size(); ++idx) {
    if (sgn(dist[idx]) == 0) continue;
    lat.decode(idx, diff);
    if (std::labs(diff[1]) > 1) continue;  // outside B
    for (std::size_t a = 0; a < table.classes(); ++a) {
      for (std::size_t b = 0; b < table.classes(); ++b) {
        if (side[a] * side[b] != -1) continue;  // outside A
        BigInt w = dist[idx] * iw.numerators[a] * iw.numerators[b];
        conditioning += w;
        if (choose(diff[1] + side[a], a) != choose(diff[1] + side[b], b)) joint += w;
      }
    }
  }
  if (sgn(conditioning) == 0) {
    throw UndefinedConditional("Pr(A and B) = 0 for scenario '" + scenario.name + "' at m = " + std::to_string(m));
  }
  BigInt den = pow(iw.denominator, m + 1);
  ConditionalSwitch out;
  out.joint = Rational(joint, den);
  out.joint.canonicalize();
  out.conditioning = Rational(conditioning, den);
  out.conditioning.canonicalize();
  out.value = Rational(joint, conditioning);
  out.value.canonicalize();
  return out;
}

Rational prob_erm_in_hstar(const ScenarioSpec& scenario, std::size_t m, double cap) {
  if (m < 1) throw ValidationError("prob_erm_in_hstar needs m >= 1");
  const auto& hstar = scenario.minimizers();
  if (hstar.indices.size() == scenario.space.size()) return Rational(1);
  PatternTable table = loss_pattern_reduce(scenario.dist, scenario.space);
  Lattice lat = make_lattice(table, m);
  check_cap(lat.cells, cap, "risk-lattice");
  auto iw = integer_weights(table.weights);
  auto dist = propagate<BigInt>(lat, iw.numerators, m);
  std::vector<long> diff(table.hypothesis_count);
  BigInt hit = 0;
  for (std::size_t idx = 0; idx < dist.size(); ++idx) {
    if (sgn(dist[idx]) == 0) continue;
    lat.decode(idx, diff);
    std::size_t best = 0;
    for (std::size_t h = 1; h < diff.size(); ++h) {
      if (diff[h] < diff[best]) best = h;
    }
    if (hstar.contains(best)) hit += dist[idx];
  }
  Rational q(hit, pow(iw.denominator, m));
  q.canonicalize();
  return q;
}

}  // namespace ermstab
