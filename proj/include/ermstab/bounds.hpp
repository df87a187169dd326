#pragma once

// Closed-form probabilities and bounds for the two-minimizer tie region and
// for ERM landing on a risk minimizer. Exact versions use big-integer
// binomials; *_float versions use log-gamma binomial pmfs.

#include <cstddef>
#include <optional>

#include "ermstab/rational.hpp"

namespace ermstab {

/// Pr(|X - k/2| <= 1/2) for X ~ Bin(k, 1/2):
/// C(k, k/2) 2^-k for even k, 2 C(k, (k-1)/2) 2^-k for odd k.
Rational central_window_prob(std::size_t k);
double central_window_prob_float(std::size_t k);

/// Pr(X = floor(k/2)) for X ~ Bin(2 floor(k/2) + 1, 1/2).
Rational odd_central_binom_prob(std::size_t k);
double odd_central_binom_prob_float(std::size_t k);

/// Pr(X = k) for X ~ Bin(n, q).
Rational binomial_pmf(std::size_t n, const Rational& q, std::size_t k);
double binomial_pmf_float(std::size_t n, double q, std::size_t k);

/// Pr(X <= c) for X ~ Bin(n, q).
Rational binomial_cdf(std::size_t n, const Rational& q, std::size_t c);

/// Pr(|R_{S^i}(h1) - R_{S^i}(h2)| <= 1/(m-1)) for two equal-risk hypotheses
/// that disagree with mass p:
///   sum_k Pr(Bin(m-1, p) = k) * central_window_prob(k).
Rational tie_gap_probability(const Rational& p, std::size_t m);
double tie_gap_probability_float(double p, std::size_t m);

/// min over 0 <= k <= m-1 of central_window_prob(k); lower-bounds the tie-gap
/// probability for every p.
Rational tie_gap_window_minimum(std::size_t m);

/// Upper bound on the tie-gap probability, splitting the disagreement count
/// at c = ceil(p (m-1) / 2):
///   Pr(Bin(m-1, p) <= c) + sup_{c < k <= m-1} central_window_prob(k).
struct TieGapUpperBound {
  std::size_t c = 0;
  Rational tail_cdf;       // Pr(Bin(m-1, p) <= c), exact
  double tail_chernoff = 0;  // exp(-p (m-1) / 8), analytic form
  Rational sup_central;    // 0 when the range is empty

  Rational total() const { return tail_cdf + sup_central; }
  double total_chernoff() const { return tail_chernoff + to_double(sup_central); }
};

TieGapUpperBound tie_gap_upper_bound(const Rational& p, std::size_t m);

/// 1 - (|H| - 1) exp(-eps^2 m / 2), with the raw value kept alongside the
/// value clamped to [0, 1].
struct ProbabilityBound {
  double raw = 0.0;
  double clamped = 0.0;
};

/// Throws on an empty gap (every hypothesis is a minimizer).
ProbabilityBound erm_in_hstar_lower_bound(std::size_t hypothesis_count, const std::optional<Rational>& gap,
                                          std::size_t m);
ProbabilityBound erm_in_hstar_lower_bound(std::size_t hypothesis_count, double gap, std::size_t m);

/// (2 pi m)^{-1/2}: training-instability rate of majority vote between two
/// constant classifiers.
double majority_vote_training_rate(std::size_t m);

/// exp(-(2 - 1/p)^2 m / 8): weak-hypothesis instability rate of majority
/// vote when p = Pr(Y = +1) > 1/2. Throws for p <= 1/2.
double majority_vote_weak_rate(double p, std::size_t m);

/// p^2 / 2: mass of mismatched (Z_i, U) pairs when Pr(Z1) = Pr(Z2) = p/2.
Rational pair_mismatch_prob(const Rational& p);

}  // namespace ermstab
