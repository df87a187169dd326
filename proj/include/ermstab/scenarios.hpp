#pragma once

// Built-in scenarios for each stability regime, and a JSON scenario format.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ermstab/core.hpp"

namespace ermstab {

/// Geometry of a pair of risk minimizers h1, h2 (h1 earlier in H's order).
/// Z1 holds the examples where h1 has strictly smaller loss, Z2 the reverse.
struct MinimizerPair {
  std::size_t first = 0;
  std::size_t second = 0;
  Rational mass_first_better;   // Pr(Z in Z1)
  Rational mass_second_better;  // Pr(Z in Z2)
  Rational disagreement;        // p = Pr(Z in Z1 u Z2)
  Rational pair_mismatch;       // Pr((Z_i, U) in Z1 x Z2 u Z2 x Z1) for independent draws
};

MinimizerPair minimizer_pair(const FiniteDistribution& dist, const HypothesisSpace& space, std::size_t first,
                             std::size_t second);

struct ScenarioSpec {
  std::string name;
  /// Constructor name and parameters for built-ins; empty builtin for loaded documents.
  std::string builtin;
  std::map<std::string, std::string> params;

  FiniteDistribution dist;
  HypothesisSpace space;
  /// Present exactly when |H*| = 2.
  std::optional<MinimizerPair> pair;

  const Minimizers& minimizers() const { return space.minimizers(); }
  const std::vector<Rational>& risks() const { return space.risks(); }
};

ScenarioSpec make_scenario(std::string name, FiniteDistribution dist, std::vector<Hypothesis> hypotheses);

/// Single input, atoms (x, +1) with weight p and (x, -1) with weight 1 - p
/// (zero-weight atoms dropped); H = [h_plus, h_minus].
ScenarioSpec two_constant(const Rational& p);

/// Two inputs; atoms (x1,+1) 1/4, (x1,-1) 1/4, (x2,-1) 1/2;
/// H = [h_a = (+1,-1), h_b = (-1,-1), h_c = (+1,+1)]. Risks 1/4, 1/4, 3/4.
ScenarioSpec three_hyp_two_min();

/// n uniform inputs, labels fair coins independent of x, h_i = +1 only on x_i.
ScenarioSpec symmetric_n_min(int n);

/// two_constant(1/2 + margin), margin in (0, 1/2).
ScenarioSpec unique_min(const Rational& margin);

/// Inputs are two bits; the label is the first bit, the hypotheses label by
/// the independent second bit or its negation.
ScenarioSpec irrelevant_feature();

/// Builds a built-in scenario from its name and string parameters
/// (p, n, margin as applicable).
ScenarioSpec builtin_scenario(const std::string& name, const std::map<std::string, std::string>& params = {});

/// The default set used by checks that run over "all built-in scenarios".
std::vector<ScenarioSpec> builtin_scenarios();

nlohmann::json scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec load_scenario(const nlohmann::json& doc);

}  // namespace ermstab
