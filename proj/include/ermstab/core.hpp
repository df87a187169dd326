#pragma once

// Finite example spaces, distributions, label-table hypotheses, 0-1 loss and
// deterministic empirical risk minimization.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ermstab/rational.hpp"

namespace ermstab {

/// An element z = (x, y) of the finite example space. `x` indexes the input
/// space and `y` is a label in {-1, +1}.
struct Example {
  std::size_t x = 0;
  int y = 1;

  friend bool operator==(const Example&, const Example&) = default;
};

/// A probability mass function over a finite set of distinct examples with
/// strictly positive exact weights summing to one.
class FiniteDistribution {
 public:
  struct Atom {
    Example z;
    Rational weight;
  };

  FiniteDistribution(std::size_t input_size, std::vector<Atom> atoms);

  std::size_t input_size() const { return input_size_; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& atom(std::size_t k) const { return atoms_.at(k); }

  /// Float view of the weights, in atom order.
  const std::vector<double>& weights() const { return weights_; }

  /// Index of the atom equal to `z`, if any.
  std::optional<std::size_t> find(const Example& z) const;

  /// Marginal mass Pr(X = x).
  Rational marginal(std::size_t x) const;

 private:
  std::size_t input_size_;
  std::vector<Atom> atoms_;
  std::vector<double> weights_;
};

struct Hypothesis {
  std::string name;
  std::vector<int> labels;  // one label in {-1, +1} per input index

  int operator()(std::size_t x) const { return labels.at(x); }
};

/// Minimizer set H* together with the gap to the best non-minimizer.
/// `gap` is empty ("no gap") exactly when every hypothesis is a minimizer.
struct Minimizers {
  std::vector<std::size_t> indices;
  std::optional<Rational> gap;

  bool contains(std::size_t h) const;
};

/// Ordered hypothesis list bound to a distribution. The order is also the ERM
/// tie-break order. Construction rejects members that agree on every input of
/// positive probability.
class HypothesisSpace {
 public:
  HypothesisSpace(std::vector<Hypothesis> hypotheses, const FiniteDistribution& dist);

  std::size_t size() const { return hypotheses_.size(); }
  std::size_t input_size() const { return input_size_; }
  const Hypothesis& operator[](std::size_t k) const { return hypotheses_.at(k); }
  const std::vector<Hypothesis>& hypotheses() const { return hypotheses_; }

  const std::vector<Rational>& risks() const { return risks_; }
  const Minimizers& minimizers() const { return minimizers_; }
  /// Pr(h_j(X) != h_k(X)) under the bound distribution.
  const Rational& disagreement(std::size_t j, std::size_t k) const;

 private:
  std::vector<Hypothesis> hypotheses_;
  std::size_t input_size_;
  std::vector<Rational> risks_;
  Minimizers minimizers_;
  std::vector<std::vector<Rational>> disagreement_;
};

/// A sequence of m >= 1 examples.
struct Sample {
  std::vector<Example> items;

  std::size_t m() const { return items.size(); }
};

/// Counts per atom of a distribution: the sufficient statistic of a sample.
struct CountVector {
  std::vector<std::size_t> counts;

  std::size_t total() const;
};

CountVector count_vector(const Sample& s, const FiniteDistribution& dist);

int loss(const Hypothesis& h, const Example& z);

Rational risk(const Hypothesis& h, const FiniteDistribution& dist);
double risk_float(const Hypothesis& h, const FiniteDistribution& dist);

Rational empirical_risk(const Hypothesis& h, const Sample& s);
Rational empirical_risk(const Hypothesis& h, const CountVector& n, const FiniteDistribution& dist);

/// Index of the empirical risk minimizer; ties go to the earliest index.
std::size_t erm(const Sample& s, const HypothesisSpace& space);
std::size_t erm(const CountVector& n, const FiniteDistribution& dist, const HypothesisSpace& space);

/// ERM over a subset of the space. Ties are still broken by the original order.
std::size_t erm_restricted(const Sample& s, const HypothesisSpace& space,
                           std::span<const std::size_t> subset);

Minimizers risk_minimizers(const HypothesisSpace& space, const FiniteDistribution& dist);

/// Atoms merged by identical loss vectors (loss(h, z))_h. Every quantity the
/// engines compute depends on a sample only through these classes.
struct PatternTable {
  std::size_t hypothesis_count = 0;
  std::vector<std::vector<std::uint8_t>> losses;  // [class][hypothesis]
  std::vector<Rational> weights;                  // [class]
  std::vector<std::size_t> class_of_atom;         // [atom]

  std::size_t classes() const { return weights.size(); }
};

PatternTable loss_pattern_reduce(const FiniteDistribution& dist, const HypothesisSpace& space);

/// One class per atom, without merging. Used to check that merging is sound.
PatternTable identity_patterns(const FiniteDistribution& dist, const HypothesisSpace& space);

/// Projection of a pattern table onto a subset of hypotheses (in the subset's
/// order), re-merging classes that become identical.
PatternTable restrict_patterns(const PatternTable& table, std::span<const std::size_t> subset);

}  // namespace ermstab
