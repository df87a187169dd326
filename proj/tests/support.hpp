#pragma once

#include "ermstab/scenarios.hpp"
#include "oracle.hpp"

namespace testing_support {

/// Plain-data copy of a scenario for the brute-force oracles.
inline oracle::Problem to_problem(const ermstab::ScenarioSpec& spec) {
  oracle::Problem pb;
  pb.input_size = spec.dist.input_size();
  for (const auto& a : spec.dist.atoms()) pb.atoms.push_back({a.z.x, a.z.y, a.weight});
  for (const auto& h : spec.space.hypotheses()) pb.labels.push_back(h.labels);
  return pb;
}

inline std::size_t notion_slot(ermstab::Notion n) {
  switch (n) {
    case ermstab::Notion::WeakHypothesis: return 0;
    case ermstab::Notion::CV: return 1;
    case ermstab::Notion::Overlap: return 2;
    case ermstab::Notion::Training: return 3;
  }
  return 0;
}

}  // namespace testing_support
