#include "ermstab/scenarios.hpp"

#include "ermstab/errors.hpp"

namespace ermstab {

MinimizerPair minimizer_pair(const FiniteDistribution& dist, const HypothesisSpace& space, std::size_t first,
                             std::size_t second) {
  MinimizerPair pair;
  pair.first = first;
  pair.second = second;
  pair.mass_first_better = 0;
  pair.mass_second_better = 0;
  for (const auto& a : dist.atoms()) {
    int l1 = loss(space[first], a.z);
    int l2 = loss(space[second], a.z);
    if (l1 < l2) pair.mass_first_better += a.weight;
    if (l2 < l1) pair.mass_second_better += a.weight;
  }
  pair.disagreement = pair.mass_first_better + pair.mass_second_better;
  pair.pair_mismatch = 2 * pair.mass_first_better * pair.mass_second_better;
  return pair;
}

ScenarioSpec make_scenario(std::string name, FiniteDistribution dist, std::vector<Hypothesis> hypotheses) {
  HypothesisSpace space(std::move(hypotheses), dist);
  std::optional<MinimizerPair> pair;
  const auto& hstar = space.minimizers().indices;
  if (hstar.size() == 2) pair = minimizer_pair(dist, space, hstar[0], hstar[1]);
  return ScenarioSpec{std::move(name), "", {}, std::move(dist), std::move(space), std::move(pair)};
}

ScenarioSpec two_constant(const Rational& p) {
  if (p < 0 || p > 1) throw ValidationError("two_constant needs p in [0, 1]; got " + to_string(p));
  std::vector<FiniteDistribution::Atom> atoms;
  if (p > 0) atoms.push_back({{0, 1}, p});
  if (p < 1) atoms.push_back({{0, -1}, Rational(1 - p)});
  auto spec = make_scenario("two_constant(p=" + to_string(p) + ")", FiniteDistribution(1, std::move(atoms)),
                            {{"h_plus", {1}}, {"h_minus", {-1}}});
  spec.builtin = "two_constant";
  spec.params = {{"p", to_string(p)}};
  return spec;
}

ScenarioSpec three_hyp_two_min() {
  FiniteDistribution dist(2, {{{0, 1}, Rational(1, 4)}, {{0, -1}, Rational(1, 4)}, {{1, -1}, Rational(1, 2)}});
  auto spec = make_scenario("three_hyp_two_min", std::move(dist),
                            {{"h_a", {1, -1}}, {"h_b", {-1, -1}}, {"h_c", {1, 1}}});
  spec.builtin = "three_hyp_two_min";
  return spec;
}

ScenarioSpec symmetric_n_min(int n) {
  if (n < 2) throw ValidationError("symmetric_n_min needs n >= 2; got " + std::to_string(n));
  const auto size = static_cast<std::size_t>(n);
  std::vector<FiniteDistribution::Atom> atoms;
  for (std::size_t x = 0; x < size; ++x) {
    atoms.push_back({{x, 1}, Rational(1, 2 * n)});
    atoms.push_back({{x, -1}, Rational(1, 2 * n)});
  }
  std::vector<Hypothesis> hs;
  for (std::size_t i = 0; i < size; ++i) {
    Hypothesis h{"h_" + std::to_string(i + 1), std::vector<int>(size, -1)};
    h.labels[i] = 1;
    hs.push_back(std::move(h));
  }
  auto spec = make_scenario("symmetric_n_min(n=" + std::to_string(n) + ")", FiniteDistribution(size, std::move(atoms)),
                            std::move(hs));
  spec.builtin = "symmetric_n_min";
  spec.params = {{"n", std::to_string(n)}};
  return spec;
}

ScenarioSpec unique_min(const Rational& margin) {
  if (margin <= 0 || margin >= Rational(1, 2)) {
    throw ValidationError("unique_min needs margin in (0, 1/2); got " + to_string(margin));
  }
  auto spec = two_constant(Rational(1, 2) + margin);
  spec.name = "unique_min(margin=" + to_string(margin) + ")";
  spec.builtin = "unique_min";
  spec.params = {{"margin", to_string(margin)}};
  if (spec.minimizers().indices.size() != 1 || spec.minimizers().gap != 2 * margin) {
    throw Error("unique_min metadata inconsistent");
  }
  return spec;
}

ScenarioSpec irrelevant_feature() {
  // input index = 2 * first_bit + second_bit
  std::vector<FiniteDistribution::Atom> atoms;
  for (std::size_t first = 0; first < 2; ++first) {
    for (std::size_t second = 0; second < 2; ++second) {
      atoms.push_back({{2 * first + second, first == 1 ? 1 : -1}, Rational(1, 4)});
    }
  }
  Hypothesis bit2{"h_bit2", {-1, 1, -1, 1}};
  Hypothesis negbit2{"h_negbit2", {1, -1, 1, -1}};
  auto spec = make_scenario("irrelevant_feature", FiniteDistribution(4, std::move(atoms)), {bit2, negbit2});
  spec.builtin = "irrelevant_feature";
  return spec;
}

namespace {

const std::string& require_param(const std::map<std::string, std::string>& params, const std::string& scenario,
                                 const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw ValidationError("scenario " + scenario + " needs parameter '" + key + "'");
  return it->second;
}

void reject_unknown(const std::map<std::string, std::string>& params, const std::string& scenario,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ValidationError("scenario " + scenario + " has no parameter '" + k + "'");
  }
}

}  // namespace

ScenarioSpec builtin_scenario(const std::string& name, const std::map<std::string, std::string>& params) {
  if (name == "two_constant") {
    reject_unknown(params, name, {"p"});
    return two_constant(parse_rational(require_param(params, name, "p")));
  }
  if (name == "three_hyp_two_min") {
    reject_unknown(params, name, {});
    return three_hyp_two_min();
  }
  if (name == "symmetric_n_min") {
    reject_unknown(params, name, {"n"});
    Rational n = parse_rational(require_param(params, name, "n"));
    if (n.get_den() != 1 || n > 64) throw ValidationError("symmetric_n_min needs a small integer n");
    return symmetric_n_min(static_cast<int>(n.get_num().get_si()));
  }
  if (name == "unique_min") {
    reject_unknown(params, name, {"margin"});
    return unique_min(parse_rational(require_param(params, name, "margin")));
  }
  if (name == "irrelevant_feature") {
    reject_unknown(params, name, {});
    return irrelevant_feature();
  }
  throw ValidationError("unknown built-in scenario '" + name +
                        "' (expected two_constant|three_hyp_two_min|symmetric_n_min|unique_min|irrelevant_feature)");
}

std::vector<ScenarioSpec> builtin_scenarios() {
  std::vector<ScenarioSpec> out;
  out.push_back(two_constant(Rational(1, 2)));
  out.push_back(two_constant(Rational(7, 10)));
  out.push_back(three_hyp_two_min());
  out.push_back(symmetric_n_min(3));
  out.push_back(unique_min(Rational(1, 5)));
  out.push_back(irrelevant_feature());
  return out;
}

nlohmann::json scenario_to_json(const ScenarioSpec& spec) {
  nlohmann::json doc;
  doc["name"] = spec.name;
  doc["input_size"] = spec.dist.input_size();
  auto& atoms = doc["atoms"] = nlohmann::json::array();
  for (const auto& a : spec.dist.atoms()) {
    atoms.push_back({{"x", a.z.x}, {"y", a.z.y}, {"weight", to_string(a.weight)}});
  }
  auto& hs = doc["hypotheses"] = nlohmann::json::array();
  for (const auto& h : spec.space.hypotheses()) hs.push_back({{"name", h.name}, {"labels", h.labels}});
  return doc;
}

namespace {

Rational json_rational(const nlohmann::json& v, const std::string& where) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw ValidationError(where + " must be a fraction string like \"1/4\" or an integer");
}

}  // namespace

ScenarioSpec load_scenario(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("scenario document must be a JSON object");
  if (doc.contains("builtin")) {
    std::map<std::string, std::string> params;
    for (const auto& [k, v] : doc.items()) {
      if (k == "builtin") continue;
      if (v.is_string()) params[k] = v.get<std::string>();
      else if (v.is_number_integer()) params[k] = std::to_string(v.get<long>());
      else throw ValidationError("built-in scenario parameter '" + k + "' must be a string or integer");
    }
    if (!doc.at("builtin").is_string()) throw ValidationError("\"builtin\" must name a built-in scenario");
    return builtin_scenario(doc.at("builtin").get<std::string>(), params);
  }

  try {
    std::string name = doc.value("name", std::string("custom"));
    if (!doc.contains("input_size") || !doc.contains("atoms") || !doc.contains("hypotheses")) {
      throw ValidationError("scenario document needs input_size, atoms and hypotheses");
    }
    auto input_size = doc.at("input_size").get<std::size_t>();
    std::vector<FiniteDistribution::Atom> atoms;
    for (const auto& a : doc.at("atoms")) {
      long y = a.at("y").get<long>();
      long x = a.at("x").get<long>();
      if (x < 0) throw ValidationError("atom input index must be nonnegative");
      atoms.push_back({{static_cast<std::size_t>(x), static_cast<int>(y)}, json_rational(a.at("weight"), "atom weight")});
    }
    std::vector<Hypothesis> hs;
    for (const auto& h : doc.at("hypotheses")) {
      hs.push_back({h.value("name", "h_" + std::to_string(hs.size() + 1)), h.at("labels").get<std::vector<int>>()});
    }
    return make_scenario(std::move(name), FiniteDistribution(input_size, std::move(atoms)), std::move(hs));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed scenario document: ") + e.what());
  }
}

}  // namespace ermstab
