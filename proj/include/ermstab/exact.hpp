#pragma once

// Exact instability probabilities delta(m) = Pr_{(S,U) ~ D^{m+1}}(discrepancy)
// by enumeration over sufficient statistics of the m-1 retained examples.

#include <cstddef>
#include <optional>
#include <string_view>

#include "ermstab/rational.hpp"
#include "ermstab/resample.hpp"
#include "ermstab/scenarios.hpp"

namespace ermstab {

enum class Arithmetic { Rational, Float };

/// How the retained sample S^i is enumerated.
///  - CountVectors: multinomial count vectors over loss-pattern classes.
///  - RiskLattice: distribution of the vector of empirical-risk differences
///    (K_h - K_0), built by forward convolution. ERM and every discrepancy
///    depend on S^i only through this vector.
///  - Sequences: every sequence of atoms, position-aware. Required when a
///    position other than i = m is requested.
///  - Auto: the smaller of CountVectors and RiskLattice.
enum class Enumeration { Auto, CountVectors, RiskLattice, Sequences };

std::string_view to_string(Arithmetic a);
std::string_view to_string(Enumeration e);

inline constexpr double kDefaultEnumerationCap = 5e7;

struct ExactOptions {
  Arithmetic arithmetic = Arithmetic::Rational;
  Enumeration enumeration = Enumeration::Auto;
  /// 1-based replaced position; defaults to m. Anything else forces Sequences.
  std::optional<std::size_t> position;
  /// Merge atoms with identical loss vectors before enumerating.
  bool reduce = true;
  double cap = kDefaultEnumerationCap;
};

struct ExactResult {
  std::size_t m = 0;
  Notion notion = Notion::CV;
  Rational beta;
  std::size_t position = 0;
  std::optional<Rational> exact;  // engaged in rational mode
  double value = 0.0;
  double enumeration_size = 0.0;
  Arithmetic arithmetic = Arithmetic::Rational;
  Enumeration enumeration = Enumeration::Auto;
};

/// Number of items the given strategy would enumerate for this scenario and m.
double enumeration_size(const ScenarioSpec& scenario, std::size_t m, Enumeration strategy, bool reduce = true);

/// The strategy Auto resolves to, and its size.
Enumeration resolve_enumeration(const ScenarioSpec& scenario, std::size_t m, const ExactOptions& options);

ExactResult exact_delta(const ScenarioSpec& scenario, std::size_t m, Notion notion, const Rational& beta,
                        const ExactOptions& options = {});

/// Two constant classifiers [h_plus, h_minus] with Pr(Y = +1) = p, summing
/// over the number of positive labels among the m-1 retained draws.
ExactResult exact_delta_two_class(const Rational& p, std::size_t m, Notion notion, const Rational& beta,
                                  Arithmetic arithmetic = Arithmetic::Rational);

/// Tie-break rule for ERM restricted to the two risk minimizers.
///  - IndexOrder: the earlier hypothesis (the library's ERM rule).
///  - AgainstReplaced: the hypothesis that errs on the example occupying the
///    replaced position. Not an ERM rule of this library; exists so the
///    verification suite can show the conditional switch bound depends on a
///    sample-independent tie order.
enum class TieRule { IndexOrder, AgainstReplaced };

struct ConditionalSwitch {
  Rational joint;         // Pr(switch and A and B)
  Rational conditioning;  // Pr(A and B)
  Rational value;         // Pr(switch | A and B)
};

/// Pr(f_S != f_{S^{i,U}} | A n B) for ERM restricted to H* = {h1, h2}, where
/// A = {(Z_i, U) in Z1 x Z2 u Z2 x Z1} and
/// B = {|R_{S^i}(h1) - R_{S^i}(h2)| <= 1/(m-1)}.
ConditionalSwitch conditional_switch_probability(const ScenarioSpec& scenario, std::size_t m,
                                                 TieRule tie = TieRule::IndexOrder);

/// Probability that ERM on a sample of size m returns a true risk minimizer.
Rational prob_erm_in_hstar(const ScenarioSpec& scenario, std::size_t m, double cap = kDefaultEnumerationCap);

}  // namespace ermstab
