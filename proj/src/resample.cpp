#include "ermstab/resample.hpp"

#include <algorithm>
#include <cstdlib>

#include "ermstab/errors.hpp"

namespace ermstab {

std::string_view to_string(Notion n) {
  switch (n) {
    case Notion::WeakHypothesis: return "weak";
    case Notion::CV: return "cv";
    case Notion::Overlap: return "overlap";
    case Notion::Training: return "training";
  }
  return "?";
}

Notion parse_notion(std::string_view text) {
  if (text == "weak" || text == "weak_hypothesis") return Notion::WeakHypothesis;
  if (text == "cv") return Notion::CV;
  if (text == "overlap") return Notion::Overlap;
  if (text == "training") return Notion::Training;
  throw ValidationError("unknown stability notion '" + std::string(text) + "' (expected weak|cv|overlap|training)");
}

namespace {

void check_position(const Sample& s, std::size_t i) {
  if (i < 1 || i > s.m()) {
    throw ValidationError("position " + std::to_string(i) + " outside [1, " + std::to_string(s.m()) + "]");
  }
}

}  // namespace

Sample delete_at(const Sample& s, std::size_t i) {
  check_position(s, i);
  if (s.m() < 2) throw ValidationError("deleting from a sample of size 1");
  Sample out;
  out.items.reserve(s.m() - 1);
  for (std::size_t k = 0; k < s.m(); ++k) {
    if (k + 1 != i) out.items.push_back(s.items[k]);
  }
  return out;
}

Sample replace_at(const Sample& s, std::size_t i, const Example& u) {
  check_position(s, i);
  Sample out = s;
  out.items[i - 1] = u;
  return out;
}

Sample insert_at(const Sample& s, std::size_t i, const Example& u) {
  if (i < 1 || i > s.m() + 1) {
    throw ValidationError("insert position " + std::to_string(i) + " outside [1, " + std::to_string(s.m() + 1) + "]");
  }
  Sample out = s;
  out.items.insert(out.items.begin() + static_cast<std::ptrdiff_t>(i - 1), u);
  return out;
}

void validate_beta(const Rational& beta) {
  if (beta < 0 || beta >= 1) {
    throw ValidationError("beta must lie in [0, 1); got " + to_string(beta));
  }
}

DrawDecision decide(const ReplacementDraw& draw, const HypothesisSpace& space) {
  return {erm(draw.s, space), erm(replace_at(draw.s, draw.i, draw.u), space)};
}

int max_loss_gap(const Hypothesis& a, const Hypothesis& b) {
  int gap = 0;
  for (std::size_t x = 0; x < a.labels.size(); ++x) {
    for (int y : {-1, 1}) {
      gap = std::max(gap, std::abs(loss(a, {x, y}) - loss(b, {x, y})));
    }
  }
  return gap;
}

namespace {

bool exceeds(const Rational& value, const Rational& beta) { return value > beta; }

bool cv_fires(const ReplacementDraw& draw, const HypothesisSpace& space, const DrawDecision& d,
              const Rational& beta) {
  int diff = std::abs(loss(space[d.on_sample], draw.u) - loss(space[d.on_replaced], draw.u));
  return exceeds(Rational(diff), beta);
}

bool overlap_fires(const ReplacementDraw& draw, const HypothesisSpace& space, const DrawDecision& d,
                   const Rational& beta) {
  if (draw.s.m() < 2) throw ValidationError("overlap stability needs m >= 2");
  if (d.on_sample == d.on_replaced) return false;
  Sample held = delete_at(draw.s, draw.i);
  Rational diff = empirical_risk(space[d.on_sample], held) - empirical_risk(space[d.on_replaced], held);
  return exceeds(abs(diff), beta);
}

}  // namespace

bool cv_discrepancy(const ReplacementDraw& draw, const HypothesisSpace& space, const Rational& beta) {
  validate_beta(beta);
  return cv_fires(draw, space, decide(draw, space), beta);
}

bool weak_discrepancy(const ReplacementDraw& draw, const HypothesisSpace& space, const Rational& beta) {
  validate_beta(beta);
  auto d = decide(draw, space);
  return exceeds(Rational(max_loss_gap(space[d.on_sample], space[d.on_replaced])), beta);
}

bool overlap_discrepancy(const ReplacementDraw& draw, const HypothesisSpace& space, const Rational& beta) {
  validate_beta(beta);
  return overlap_fires(draw, space, decide(draw, space), beta);
}

bool training_discrepancy(const ReplacementDraw& draw, const HypothesisSpace& space, const Rational& beta) {
  validate_beta(beta);
  auto d = decide(draw, space);
  return cv_fires(draw, space, d, beta) || overlap_fires(draw, space, d, beta);
}

bool discrepancy(Notion notion, const ReplacementDraw& draw, const HypothesisSpace& space, const Rational& beta) {
  switch (notion) {
    case Notion::WeakHypothesis: return weak_discrepancy(draw, space, beta);
    case Notion::CV: return cv_discrepancy(draw, space, beta);
    case Notion::Overlap: return overlap_discrepancy(draw, space, beta);
    case Notion::Training: return training_discrepancy(draw, space, beta);
  }
  return false;
}

}  // namespace ermstab
