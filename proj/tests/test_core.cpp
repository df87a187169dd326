#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ermstab/core.hpp"
#include "ermstab/errors.hpp"
#include "ermstab/scenarios.hpp"

using namespace ermstab;

namespace {

Sample labels_sample(std::initializer_list<int> ys) {
  Sample s;
  for (int y : ys) s.items.push_back({0, y});
  return s;
}

}  // namespace

TEST_CASE("loss is the 0-1 indicator of a mislabel") {
  Hypothesis plus{"h", {1}};
  CHECK(loss(plus, {0, 1}) == 0);
  CHECK(loss(plus, {0, -1}) == 1);

  auto tc = two_constant(Rational(1, 2));
  CHECK(loss(tc.space[0], {0, -1}) == 1);

  CHECK_THROWS_AS(loss(plus, {3, 1}), ValidationError);
  CHECK_THROWS_AS(loss(plus, {0, 0}), ValidationError);
}

TEST_CASE("risk") {
  auto tc = two_constant(Rational(7, 10));
  CHECK(risk(tc.space[0], tc.dist) == Rational(3, 10));

  auto th = three_hyp_two_min();
  CHECK(risk(th.space[0], th.dist) == Rational(1, 4));

  FiniteDistribution d(2, {{{0, 1}, Rational(1, 3)}, {{1, -1}, Rational(2, 3)}});
  CHECK(risk(Hypothesis{"perfect", {1, -1}}, d) == 0);
}

TEST_CASE("float risk reproduces rational risk") {
  for (const auto& s : builtin_scenarios()) {
    for (const auto& h : s.space.hypotheses()) {
      CHECK(std::abs(risk_float(h, s.dist) - to_double(risk(h, s.dist))) <= 1e-12);
    }
  }
}

TEST_CASE("empirical risk on samples and count vectors") {
  auto tc = two_constant(Rational(1, 2));
  CHECK(empirical_risk(tc.space[0], labels_sample({1, 1, -1})) == Rational(1, 3));
  CHECK(empirical_risk(tc.space[0], labels_sample({-1, -1})) == 1);

  auto th = three_hyp_two_min();
  CountVector n{{2, 1, 3}};
  CHECK(empirical_risk(th.space[0], n, th.dist) == Rational(1, 6));

  Sample s;
  for (std::size_t a = 0; a < th.dist.size(); ++a) {
    for (std::size_t k = 0; k < n.counts[a]; ++k) s.items.push_back(th.dist.atom(a).z);
  }
  for (const auto& h : th.space.hypotheses()) CHECK(empirical_risk(h, s) == empirical_risk(h, n, th.dist));

  CHECK_THROWS_AS(empirical_risk(tc.space[0], Sample{}), ValidationError);
  CHECK_THROWS_AS(empirical_risk(tc.space[0], CountVector{{0, 0}}, tc.dist), ValidationError);
}

TEST_CASE("erm picks the empirical minimizer, earliest on ties") {
  auto tc = two_constant(Rational(1, 2));
  CHECK(erm(labels_sample({1, 1, -1}), tc.space) == 0);
  CHECK(erm(labels_sample({1, -1}), tc.space) == 0);
  CHECK(erm(labels_sample({-1, -1, 1}), tc.space) == 1);

  // counts (0, 3, 3): empirical risks 1/2, 0, 1
  auto th = three_hyp_two_min();
  CountVector n{{0, 3, 3}};
  CHECK(empirical_risk(th.space[0], n, th.dist) == Rational(1, 2));
  CHECK(empirical_risk(th.space[1], n, th.dist) == 0);
  CHECK(empirical_risk(th.space[2], n, th.dist) == 1);
  CHECK(erm(n, th.dist, th.space) == 1);

  CHECK_THROWS_AS(erm(Sample{}, tc.space), ValidationError);
}

TEST_CASE("erm_restricted") {
  auto th = three_hyp_two_min();
  Sample s;
  for (std::size_t a = 0; a < 3; ++a) {
    s.items.push_back(th.dist.atom(a).z);
    s.items.push_back(th.dist.atom(a).z);
  }
  const std::size_t all[] = {0, 1, 2};
  CHECK(erm_restricted(s, th.space, all) == erm(s, th.space));
  const std::size_t ac[] = {2, 0};
  CHECK(erm_restricted(s, th.space, ac) == 0);

  auto sym = symmetric_n_min(3);
  Sample t{{{0, 1}, {0, 1}, {1, -1}}};  // h_1 makes no mistakes
  const std::size_t first_two[] = {0, 1};
  CHECK(erm_restricted(t, sym.space, first_two) == 0);

  // both minimizers tie on a single disagreement pair; the earlier wins
  Sample tie{{{0, 1}, {1, 1}}};
  const std::size_t reversed[] = {1, 0};
  CHECK(erm_restricted(tie, sym.space, reversed) == 0);

  CHECK_THROWS_AS(erm_restricted(s, th.space, std::span<const std::size_t>{}), ValidationError);
  const std::size_t bad[] = {7};
  CHECK_THROWS_AS(erm_restricted(s, th.space, bad), ValidationError);
}

TEST_CASE("risk minimizers and gap") {
  auto half = two_constant(Rational(1, 2));
  auto mh = risk_minimizers(half.space, half.dist);
  CHECK(mh.indices == std::vector<std::size_t>{0, 1});
  CHECK_FALSE(mh.gap.has_value());

  auto seven = two_constant(Rational(7, 10));
  CHECK(seven.minimizers().indices == std::vector<std::size_t>{0});
  REQUIRE(seven.minimizers().gap.has_value());
  CHECK(*seven.minimizers().gap == Rational(2, 5));

  auto th = three_hyp_two_min();
  CHECK(th.risks() == std::vector<Rational>{Rational(1, 4), Rational(1, 4), Rational(3, 4)});
  CHECK(th.minimizers().indices == std::vector<std::size_t>{0, 1});
  CHECK(*th.minimizers().gap == Rational(1, 2));

  auto zero = two_constant(Rational(0));
  CHECK(zero.minimizers().indices == std::vector<std::size_t>{1});
}

TEST_CASE("loss pattern reduction") {
  // two constant classifiers over ten inputs
  std::vector<FiniteDistribution::Atom> atoms;
  for (std::size_t x = 0; x < 10; ++x) {
    atoms.push_back({{x, 1}, Rational(7, 100)});
    atoms.push_back({{x, -1}, Rational(3, 100)});
  }
  FiniteDistribution d(10, atoms);
  HypothesisSpace h({{"plus", std::vector<int>(10, 1)}, {"minus", std::vector<int>(10, -1)}}, d);
  auto t = loss_pattern_reduce(d, h);
  REQUIRE(t.classes() == 2);
  CHECK(t.weights[0] == Rational(7, 10));
  CHECK(t.weights[1] == Rational(3, 10));
  CHECK(t.class_of_atom.size() == 20);

  HypothesisSpace single({{"plus", std::vector<int>(10, 1)}}, d);
  CHECK(loss_pattern_reduce(d, single).classes() <= 2);

  auto th = three_hyp_two_min();
  CHECK(loss_pattern_reduce(th.dist, th.space).classes() == 3);
  CHECK(identity_patterns(th.dist, th.space).classes() == 3);

  auto sym = symmetric_n_min(3);
  const std::size_t pair[] = {0, 1};
  auto r = restrict_patterns(loss_pattern_reduce(sym.dist, sym.space), pair);
  Rational total = 0;
  for (const auto& w : r.weights) total += w;
  CHECK(total == 1);
  CHECK(r.classes() <= 4);
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(FiniteDistribution(1, {{{0, 1}, Rational(1, 2)}}), ValidationError);
  CHECK_THROWS_AS(FiniteDistribution(1, {{{0, 1}, Rational(3, 2)}, {{0, -1}, Rational(-1, 2)}}), ValidationError);
  CHECK_THROWS_AS(FiniteDistribution(1, {{{0, 1}, Rational(1, 2)}, {{0, 1}, Rational(1, 2)}}), ValidationError);
  CHECK_THROWS_AS(FiniteDistribution(1, {{{2, 1}, Rational(1)}}), ValidationError);
  CHECK_THROWS_AS(FiniteDistribution(1, {{{0, 2}, Rational(1)}}), ValidationError);
}

TEST_CASE("hypotheses equal almost surely are rejected") {
  FiniteDistribution d(2, {{{0, 1}, Rational(1, 2)}, {{0, -1}, Rational(1, 2)}});
  try {
    HypothesisSpace({{"a", {1, 1}}, {"b", {1, -1}}}, d);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("a.s.") != std::string::npos);
  }
  CHECK_THROWS_AS(HypothesisSpace({}, d), ValidationError);
  CHECK_THROWS_AS(HypothesisSpace({{"short", {1}}}, d), ValidationError);
}

TEST_CASE("erm is invariant under sample permutations") {
  std::mt19937_64 rng(20240917);
  for (const auto& spec : builtin_scenarios()) {
    std::uniform_int_distribution<std::size_t> atom(0, spec.dist.size() - 1);
    for (int rep = 0; rep < 200; ++rep) {
      Sample s;
      const std::size_t m = 1 + rep % 9;
      for (std::size_t k = 0; k < m; ++k) s.items.push_back(spec.dist.atom(atom(rng)).z);
      const std::size_t base = erm(s, spec.space);
      CHECK(erm(count_vector(s, spec.dist), spec.dist, spec.space) == base);
      for (int perm = 0; perm < 4; ++perm) {
        std::shuffle(s.items.begin(), s.items.end(), rng);
        CHECK(erm(s, spec.space) == base);
      }
    }
  }
}

TEST_CASE("equal-risk minimizers have equal advantage mass") {
  for (const auto& spec : builtin_scenarios()) {
    const auto& hstar = spec.minimizers().indices;
    for (std::size_t a = 0; a < hstar.size(); ++a) {
      for (std::size_t b = a + 1; b < hstar.size(); ++b) {
        auto pair = minimizer_pair(spec.dist, spec.space, hstar[a], hstar[b]);
        CHECK(pair.mass_first_better == pair.mass_second_better);
        CHECK(pair.disagreement == spec.space.disagreement(hstar[a], hstar[b]));
        CHECK(pair.disagreement > 0);
      }
    }
  }
}
