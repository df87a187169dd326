#pragma once

// Brute-force reference computations used as independent oracles. Nothing in
// here calls into the library's ERM, discrepancy or enumeration code; inputs
// are plain atom and label tables.

#include <array>
#include <cstdlib>
#include <map>
#include <vector>

#include <gmpxx.h>

namespace oracle {

struct Atom {
  std::size_t x;
  int y;
  mpq_class weight;
};

struct Problem {
  std::size_t input_size;
  std::vector<Atom> atoms;
  std::vector<std::vector<int>> labels;  // [hypothesis][x]
};

inline int loss01(const std::vector<int>& h, std::size_t x, int y) { return h[x] != y ? 1 : 0; }

inline std::size_t argmin_mistakes(const Problem& pb, const std::vector<std::size_t>& seq) {
  std::size_t best = 0;
  long best_k = -1;
  for (std::size_t h = 0; h < pb.labels.size(); ++h) {
    long k = 0;
    for (auto a : seq) k += loss01(pb.labels[h], pb.atoms[a].x, pb.atoms[a].y);
    if (best_k < 0 || k < best_k) {
      best = h;
      best_k = k;
    }
  }
  return best;
}

/// Indices: 0 weak, 1 cv, 2 overlap, 3 training.
using NotionTotals = std::array<mpq_class, 4>;

/// Sums Pr(indicator) over every atom sequence (z_1..z_m, u) with the
/// replacement at 1-based position `pos`, for each beta in `betas`.
inline std::vector<NotionTotals> sequence_space(const Problem& pb, std::size_t m, std::size_t pos,
                                                const std::vector<mpq_class>& betas) {
  const std::size_t n_atoms = pb.atoms.size();
  std::vector<NotionTotals> out(betas.size());
  for (auto& t : out) t.fill(mpq_class(0));
  std::vector<std::size_t> idx(m + 1, 0);
  std::vector<std::size_t> s(m), r(m), held(m - 1);
  while (true) {
    mpq_class w = 1;
    for (auto k : idx) w *= pb.atoms[k].weight;
    for (std::size_t k = 0; k < m; ++k) s[k] = idx[k];
    r = s;
    r[pos - 1] = idx[m];
    held.clear();
    for (std::size_t k = 0; k < m; ++k) {
      if (k != pos - 1) held.push_back(s[k]);
    }
    const std::size_t fs = argmin_mistakes(pb, s);
    const std::size_t fr = argmin_mistakes(pb, r);
    const Atom& u = pb.atoms[idx[m]];
    const int cv_gap = std::abs(loss01(pb.labels[fs], u.x, u.y) - loss01(pb.labels[fr], u.x, u.y));
    int weak_gap = 0;
    for (std::size_t x = 0; x < pb.input_size; ++x) {
      for (int y : {-1, 1}) weak_gap = std::max(weak_gap, std::abs(loss01(pb.labels[fs], x, y) - loss01(pb.labels[fr], x, y)));
    }
    long ks = 0, kr = 0;
    for (auto a : held) {
      ks += loss01(pb.labels[fs], pb.atoms[a].x, pb.atoms[a].y);
      kr += loss01(pb.labels[fr], pb.atoms[a].x, pb.atoms[a].y);
    }
    mpq_class overlap_gap(std::labs(ks - kr), static_cast<long>(m - 1));
    overlap_gap.canonicalize();
    for (std::size_t b = 0; b < betas.size(); ++b) {
      const bool weak = mpq_class(weak_gap) > betas[b];
      const bool cv = mpq_class(cv_gap) > betas[b];
      const bool overlap = overlap_gap > betas[b];
      if (weak) out[b][0] += w;
      if (cv) out[b][1] += w;
      if (overlap) out[b][2] += w;
      if (cv || overlap) out[b][3] += w;
    }
    std::size_t k = 0;
    while (k <= m && ++idx[k] == n_atoms) idx[k++] = 0;
    if (k > m) break;
  }
  return out;
}

/// delta_CV for majority vote between two constant classifiers at p = 1/2
/// with ties to +1, by listing all 2^(m+1) equiprobable label vectors.
inline mpq_class fair_coin_cv(std::size_t m) {
  const std::size_t len = m + 1;
  long hits = 0;
  for (unsigned long bits = 0; bits < (1UL << len); ++bits) {
    auto label = [&](std::size_t k) { return (bits >> k) & 1UL ? 1 : -1; };
    auto majority = [&](bool replaced) {
      long sum = 0;
      for (std::size_t k = 0; k < m; ++k) sum += (replaced && k == m - 1) ? label(m) : label(k);
      return sum >= 0 ? 1 : -1;
    };
    if (majority(false) != majority(true)) ++hits;
  }
  mpq_class q(hits, 1L << len);
  q.canonicalize();
  return q;
}

/// Pr(|#Z2 - #Z1| <= 1) over n i.i.d. draws landing in Z1 or Z2 with
/// probability p/2 each and elsewhere with probability 1 - p, by listing
/// all 3^n outcome sequences.
inline mpq_class tie_gap_sequences(const mpq_class& p, std::size_t n) {
  const mpq_class half = p / 2;
  const mpq_class rest = 1 - p;
  std::vector<int> seq(n, 0);
  mpq_class total = 0;
  while (true) {
    long d = 0;
    mpq_class w = 1;
    for (int v : seq) {
      if (v == 1) {
        ++d;
        w *= half;
      } else if (v == 2) {
        --d;
        w *= half;
      } else {
        w *= rest;
      }
    }
    if (std::labs(d) <= 1) total += w;
    std::size_t k = 0;
    while (k < n && ++seq[k] == 3) seq[k++] = 0;
    if (k == n) break;
  }
  return total;
}

}  // namespace oracle
