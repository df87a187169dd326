#include "ermstab/core.hpp"

#include <algorithm>
#include <map>

#include "ermstab/errors.hpp"

namespace ermstab {

FiniteDistribution::FiniteDistribution(std::size_t input_size, std::vector<Atom> atoms)
    : input_size_(input_size), atoms_(std::move(atoms)) {
  if (input_size_ == 0) throw ValidationError("input space must be nonempty");
  if (atoms_.empty()) throw ValidationError("distribution needs at least one atom");
  Rational total = 0;
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    const auto& a = atoms_[k];
    if (a.z.x >= input_size_) {
      throw ValidationError("atom " + std::to_string(k) + " has input index " + std::to_string(a.z.x) +
                            " outside an input space of size " + std::to_string(input_size_));
    }
    if (a.z.y != 1 && a.z.y != -1) {
      throw ValidationError("atom " + std::to_string(k) + " has label " + std::to_string(a.z.y) +
                            "; labels must be -1 or +1");
    }
    if (a.weight <= 0) {
      throw ValidationError("atom " + std::to_string(k) + " has non-positive weight " + to_string(a.weight));
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (atoms_[j].z == a.z) {
        throw ValidationError("duplicate atom (x=" + std::to_string(a.z.x) + ", y=" + std::to_string(a.z.y) + ")");
      }
    }
    total += a.weight;
  }
  if (total != 1) throw ValidationError("weights sum to " + to_string(total) + ", expected exactly 1");
  weights_.reserve(atoms_.size());
  for (const auto& a : atoms_) weights_.push_back(to_double(a.weight));
}

std::optional<std::size_t> FiniteDistribution::find(const Example& z) const {
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    if (atoms_[k].z == z) return k;
  }
  return std::nullopt;
}

Rational FiniteDistribution::marginal(std::size_t x) const {
  Rational r = 0;
  for (const auto& a : atoms_) {
    if (a.z.x == x) r += a.weight;
  }
  return r;
}

bool Minimizers::contains(std::size_t h) const {
  return std::find(indices.begin(), indices.end(), h) != indices.end();
}

HypothesisSpace::HypothesisSpace(std::vector<Hypothesis> hypotheses, const FiniteDistribution& dist)
    : hypotheses_(std::move(hypotheses)), input_size_(dist.input_size()) {
  if (hypotheses_.empty()) throw ValidationError("hypothesis space must be nonempty");
  for (const auto& h : hypotheses_) {
    if (h.labels.size() != input_size_) {
      throw ValidationError("hypothesis '" + h.name + "' has " + std::to_string(h.labels.size()) +
                            " labels for an input space of size " + std::to_string(input_size_));
    }
    for (int y : h.labels) {
      if (y != 1 && y != -1) throw ValidationError("hypothesis '" + h.name + "' has a label other than -1/+1");
    }
  }

  std::vector<Rational> marginals(input_size_);
  for (std::size_t x = 0; x < input_size_; ++x) marginals[x] = dist.marginal(x);

  const std::size_t n = hypotheses_.size();
  disagreement_.assign(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      Rational mass = 0;
      for (std::size_t x = 0; x < input_size_; ++x) {
        if (hypotheses_[j].labels[x] != hypotheses_[k].labels[x]) mass += marginals[x];
      }
      if (mass == 0) {
        throw ValidationError("hypotheses '" + hypotheses_[j].name + "' and '" + hypotheses_[k].name +
                              "' agree on every input of positive probability; a finite space may not "
                              "contain h1 != h2 with h1(X) = h2(X) a.s.");
      }
      disagreement_[j][k] = mass;
      disagreement_[k][j] = mass;
    }
  }

  risks_.reserve(n);
  for (const auto& h : hypotheses_) risks_.push_back(risk(h, dist));
  minimizers_ = risk_minimizers(*this, dist);
}

const Rational& HypothesisSpace::disagreement(std::size_t j, std::size_t k) const {
  return disagreement_.at(j).at(k);
}

std::size_t CountVector::total() const {
  std::size_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

CountVector count_vector(const Sample& s, const FiniteDistribution& dist) {
  CountVector n{std::vector<std::size_t>(dist.size(), 0)};
  for (const auto& z : s.items) {
    auto k = dist.find(z);
    if (!k) {
      throw ValidationError("sample element (x=" + std::to_string(z.x) + ", y=" + std::to_string(z.y) +
                            ") is not in the distribution's support");
    }
    ++n.counts[*k];
  }
  return n;
}

int loss(const Hypothesis& h, const Example& z) {
  if (z.x >= h.labels.size()) {
    throw ValidationError("invalid example: input index " + std::to_string(z.x) + " outside hypothesis '" +
                          h.name + "' domain of size " + std::to_string(h.labels.size()));
  }
  if (z.y != 1 && z.y != -1) throw ValidationError("invalid example: label must be -1 or +1");
  return h.labels[z.x] != z.y ? 1 : 0;
}

Rational risk(const Hypothesis& h, const FiniteDistribution& dist) {
  Rational r = 0;
  for (const auto& a : dist.atoms()) {
    if (loss(h, a.z)) r += a.weight;
  }
  return r;
}

double risk_float(const Hypothesis& h, const FiniteDistribution& dist) {
  double r = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (loss(h, dist.atom(k).z)) r += dist.weights()[k];
  }
  return r;
}

namespace {

std::size_t mistakes(const Hypothesis& h, const Sample& s) {
  std::size_t k = 0;
  for (const auto& z : s.items) k += static_cast<std::size_t>(loss(h, z));
  return k;
}

std::size_t mistakes(const Hypothesis& h, const CountVector& n, const FiniteDistribution& dist) {
  if (n.counts.size() != dist.size()) throw ValidationError("count vector does not match the distribution");
  std::size_t k = 0;
  for (std::size_t a = 0; a < n.counts.size(); ++a) {
    if (loss(h, dist.atom(a).z)) k += n.counts[a];
  }
  return k;
}

}  // namespace

Rational empirical_risk(const Hypothesis& h, const Sample& s) {
  if (s.m() == 0) throw ValidationError("empirical risk of an empty sample");
  Rational r(static_cast<unsigned long>(mistakes(h, s)), static_cast<unsigned long>(s.m()));
  r.canonicalize();
  return r;
}

Rational empirical_risk(const Hypothesis& h, const CountVector& n, const FiniteDistribution& dist) {
  const std::size_t m = n.total();
  if (m == 0) throw ValidationError("empirical risk of an empty sample");
  Rational r(static_cast<unsigned long>(mistakes(h, n, dist)), static_cast<unsigned long>(m));
  r.canonicalize();
  return r;
}

std::size_t erm(const Sample& s, const HypothesisSpace& space) {
  if (s.m() == 0) throw ValidationError("ERM on an empty sample");
  std::size_t best = 0;
  std::size_t best_mistakes = mistakes(space[0], s);
  for (std::size_t h = 1; h < space.size(); ++h) {
    std::size_t k = mistakes(space[h], s);
    if (k < best_mistakes) {
      best = h;
      best_mistakes = k;
    }
  }
  return best;
}

std::size_t erm(const CountVector& n, const FiniteDistribution& dist, const HypothesisSpace& space) {
  if (n.total() == 0) throw ValidationError("ERM on an empty sample");
  std::size_t best = 0;
  std::size_t best_mistakes = mistakes(space[0], n, dist);
  for (std::size_t h = 1; h < space.size(); ++h) {
    std::size_t k = mistakes(space[h], n, dist);
    if (k < best_mistakes) {
      best = h;
      best_mistakes = k;
    }
  }
  return best;
}

std::size_t erm_restricted(const Sample& s, const HypothesisSpace& space, std::span<const std::size_t> subset) {
  if (subset.empty()) throw ValidationError("ERM over an empty hypothesis subset");
  if (s.m() == 0) throw ValidationError("ERM on an empty sample");
  for (auto h : subset) {
    if (h >= space.size()) throw ValidationError("hypothesis index " + std::to_string(h) + " out of range");
  }
  std::vector<std::size_t> order(subset.begin(), subset.end());
  std::sort(order.begin(), order.end());
  std::size_t best = order.front();
  std::size_t best_mistakes = mistakes(space[best], s);
  for (std::size_t k = 1; k < order.size(); ++k) {
    std::size_t e = mistakes(space[order[k]], s);
    if (e < best_mistakes) {
      best = order[k];
      best_mistakes = e;
    }
  }
  return best;
}

Minimizers risk_minimizers(const HypothesisSpace& space, const FiniteDistribution& dist) {
  std::vector<Rational> r;
  r.reserve(space.size());
  for (const auto& h : space.hypotheses()) r.push_back(risk(h, dist));
  const Rational best = *std::min_element(r.begin(), r.end());
  Minimizers out;
  std::optional<Rational> runner_up;
  for (std::size_t h = 0; h < r.size(); ++h) {
    if (r[h] == best) {
      out.indices.push_back(h);
    } else if (!runner_up || r[h] < *runner_up) {
      runner_up = r[h];
    }
  }
  if (runner_up) out.gap = *runner_up - best;
  return out;
}

namespace {

PatternTable build_patterns(const FiniteDistribution& dist, const HypothesisSpace& space, bool merge) {
  PatternTable t;
  t.hypothesis_count = space.size();
  std::map<std::vector<std::uint8_t>, std::size_t> index;
  for (const auto& a : dist.atoms()) {
    std::vector<std::uint8_t> v(space.size());
    for (std::size_t h = 0; h < space.size(); ++h) v[h] = static_cast<std::uint8_t>(loss(space[h], a.z));
    if (merge) {
      auto [it, inserted] = index.emplace(v, t.weights.size());
      if (!inserted) {
        t.weights[it->second] += a.weight;
        t.class_of_atom.push_back(it->second);
        continue;
      }
    }
    t.class_of_atom.push_back(t.weights.size());
    t.losses.push_back(std::move(v));
    t.weights.push_back(a.weight);
  }
  return t;
}

}  // namespace

PatternTable loss_pattern_reduce(const FiniteDistribution& dist, const HypothesisSpace& space) {
  return build_patterns(dist, space, true);
}

PatternTable identity_patterns(const FiniteDistribution& dist, const HypothesisSpace& space) {
  return build_patterns(dist, space, false);
}

PatternTable restrict_patterns(const PatternTable& table, std::span<const std::size_t> subset) {
  if (subset.empty()) throw ValidationError("restriction to an empty hypothesis subset");
  PatternTable t;
  t.hypothesis_count = subset.size();
  std::map<std::vector<std::uint8_t>, std::size_t> index;
  std::vector<std::size_t> remap(table.classes());
  for (std::size_t c = 0; c < table.classes(); ++c) {
    std::vector<std::uint8_t> v;
    v.reserve(subset.size());
    for (auto h : subset) {
      if (h >= table.hypothesis_count) throw ValidationError("hypothesis index out of range");
      v.push_back(table.losses[c][h]);
    }
    auto [it, inserted] = index.emplace(v, t.weights.size());
    if (inserted) {
      t.losses.push_back(std::move(v));
      t.weights.push_back(table.weights[c]);
    } else {
      t.weights[it->second] += table.weights[c];
    }
    remap[c] = it->second;
  }
  for (auto c : table.class_of_atom) t.class_of_atom.push_back(remap[c]);
  return t;
}

}  // namespace ermstab
