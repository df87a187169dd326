#pragma once

// Leave-one-out deletion/replacement and the per-draw discrepancy indicators
// behind the four stability notions.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "ermstab/core.hpp"

namespace ermstab {

enum class Notion { WeakHypothesis, CV, Overlap, Training };

std::string_view to_string(Notion n);
Notion parse_notion(std::string_view text);
inline constexpr Notion kAllNotions[] = {Notion::WeakHypothesis, Notion::CV, Notion::Overlap, Notion::Training};

/// A sample S, a 1-based position i and a replacement example U.
struct ReplacementDraw {
  Sample s;
  std::size_t i = 1;
  Example u;
};

/// s^i: S with position i (1-based) removed.
Sample delete_at(const Sample& s, std::size_t i);
/// s^{i,u}: S with position i (1-based) replaced by u.
Sample replace_at(const Sample& s, std::size_t i, const Example& u);
/// Inverse of delete_at: inserts u so that it ends up at position i.
Sample insert_at(const Sample& s, std::size_t i, const Example& u);

/// Throws unless beta lies in [0, 1). At beta >= 1 every 0-1 loss
/// discrepancy is zero, so such requests are rejected.
void validate_beta(const Rational& beta);

/// ERM outputs on S and on S^{i,U}.
struct DrawDecision {
  std::size_t on_sample = 0;
  std::size_t on_replaced = 0;
};

DrawDecision decide(const ReplacementDraw& draw, const HypothesisSpace& space);

/// Largest loss difference between two hypotheses over the whole finite
/// example space (every input with both labels), 0 or 1 under 0-1 loss.
int max_loss_gap(const Hypothesis& a, const Hypothesis& b);

bool cv_discrepancy(const ReplacementDraw& draw, const HypothesisSpace& space, const Rational& beta);
bool weak_discrepancy(const ReplacementDraw& draw, const HypothesisSpace& space, const Rational& beta);
bool overlap_discrepancy(const ReplacementDraw& draw, const HypothesisSpace& space, const Rational& beta);
bool training_discrepancy(const ReplacementDraw& draw, const HypothesisSpace& space, const Rational& beta);

bool discrepancy(Notion notion, const ReplacementDraw& draw, const HypothesisSpace& space, const Rational& beta);

}  // namespace ermstab
