#include "ermstab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ermstab/errors.hpp"

namespace ermstab {
namespace {

BigInt pow2(std::size_t e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

BigInt pow(const BigInt& base, std::size_t e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

/// Numerator of central_window_prob(k) over 2^k.
BigInt central_window_numerator(std::size_t k) {
  if (k % 2 == 0) return binomial(k, k / 2);
  return 2 * binomial(k, (k - 1) / 2);
}

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

void check_probability(const Rational& p) {
  if (p < 0 || p > 1) throw ValidationError("probability must lie in [0, 1]; got " + to_string(p));
}

}  // namespace

Rational central_window_prob(std::size_t k) {
  Rational q(central_window_numerator(k), pow2(k));
  q.canonicalize();
  return q;
}

double central_window_prob_float(std::size_t k) {
  if (k % 2 == 0) return std::exp(log_binomial(k, k / 2) - static_cast<double>(k) * std::numbers::ln2);
  return 2.0 * std::exp(log_binomial(k, (k - 1) / 2) - static_cast<double>(k) * std::numbers::ln2);
}

Rational odd_central_binom_prob(std::size_t k) {
  const std::size_t half = k / 2;
  Rational q(binomial(2 * half + 1, half), pow2(2 * half + 1));
  q.canonicalize();
  return q;
}

double odd_central_binom_prob_float(std::size_t k) {
  const std::size_t half = k / 2;
  return std::exp(log_binomial(2 * half + 1, half) - static_cast<double>(2 * half + 1) * std::numbers::ln2);
}

Rational binomial_pmf(std::size_t n, const Rational& q, std::size_t k) {
  check_probability(q);
  if (k > n) return 0;
  const BigInt den = q.get_den();
  Rational r(binomial(n, k) * pow(q.get_num(), k) * pow(BigInt(den - q.get_num()), n - k), pow(den, n));
  r.canonicalize();
  return r;
}

double binomial_pmf_float(std::size_t n, double q, std::size_t k) {
  if (q < 0.0 || q > 1.0) throw ValidationError("probability must lie in [0, 1]");
  if (k > n) return 0.0;
  if (q == 0.0) return k == 0 ? 1.0 : 0.0;
  if (q == 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(log_binomial(n, k) + static_cast<double>(k) * std::log(q) +
                  static_cast<double>(n - k) * std::log1p(-q));
}

Rational binomial_cdf(std::size_t n, const Rational& q, std::size_t c) {
  check_probability(q);
  const BigInt den = q.get_den();
  const BigInt a = q.get_num();
  const BigInt b = den - a;
  BigInt total = 0;
  BigInt coef = 1;  // C(n, k)
  for (std::size_t k = 0; k <= std::min(c, n); ++k) {
    total += coef * pow(a, k) * pow(b, n - k);
    coef = coef * static_cast<unsigned long>(n - k) / static_cast<unsigned long>(k + 1);
  }
  Rational r(total, pow(den, n));
  r.canonicalize();
  return r;
}

Rational tie_gap_probability(const Rational& p, std::size_t m) {
  check_probability(p);
  if (m < 2) throw ValidationError("tie-gap probability needs m >= 2");
  const std::size_t n = m - 1;
  const BigInt den = p.get_den();
  const BigInt a = p.get_num();
  const BigInt b2 = 2 * (den - a);
  // term_k = C(n,k) a^k b^{n-k} num_k 2^{n-k}, common denominator den^n 2^n
  std::vector<BigInt> b2_pow(n + 1);
  b2_pow[0] = 1;
  for (std::size_t k = 1; k <= n; ++k) b2_pow[k] = b2_pow[k - 1] * b2;
  BigInt total = 0;
  BigInt coef = 1;
  BigInt a_pow = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    total += coef * a_pow * b2_pow[n - k] * central_window_numerator(k);
    coef = coef * static_cast<unsigned long>(n - k) / static_cast<unsigned long>(k + 1);
    a_pow *= a;
  }
  Rational r(total, pow(den, n) * pow2(n));
  r.canonicalize();
  return r;
}

double tie_gap_probability_float(double p, std::size_t m) {
  if (p < 0.0 || p > 1.0) throw ValidationError("probability must lie in [0, 1]");
  if (m < 2) throw ValidationError("tie-gap probability needs m >= 2");
  const std::size_t n = m - 1;
  double total = 0.0;
  for (std::size_t k = 0; k <= n; ++k) total += binomial_pmf_float(n, p, k) * central_window_prob_float(k);
  return total;
}

Rational tie_gap_window_minimum(std::size_t m) {
  if (m < 1) throw ValidationError("window minimum needs m >= 1");
  Rational best = central_window_prob(0);
  for (std::size_t k = 1; k < m; ++k) {
    Rational v = central_window_prob(k);
    if (v < best) best = v;
  }
  return best;
}

TieGapUpperBound tie_gap_upper_bound(const Rational& p, std::size_t m) {
  check_probability(p);
  if (p == 0) throw ValidationError("tie-gap upper bound needs p > 0");
  if (m < 3) throw ValidationError("tie-gap upper bound needs m >= 3");
  const std::size_t n = m - 1;
  TieGapUpperBound out;
  // ceil(p n / 2)
  BigInt scaled = p.get_num() * static_cast<unsigned long>(n);
  BigInt half_den = 2 * BigInt(p.get_den());
  BigInt c;
  mpz_cdiv_q(c.get_mpz_t(), scaled.get_mpz_t(), half_den.get_mpz_t());
  out.c = c.get_ui();
  out.tail_cdf = binomial_cdf(n, p, out.c);
  out.tail_chernoff = std::exp(-to_double(p) * static_cast<double>(n) / 8.0);
  out.sup_central = 0;
  for (std::size_t k = out.c + 1; k <= n; ++k) {
    Rational v = central_window_prob(k);
    if (v > out.sup_central) out.sup_central = v;
  }
  return out;
}

ProbabilityBound erm_in_hstar_lower_bound(std::size_t hypothesis_count, double gap, std::size_t m) {
  if (hypothesis_count < 1) throw ValidationError("hypothesis count must be at least 1");
  if (!(gap > 0.0)) throw ValidationError("risk gap must be positive");
  ProbabilityBound b;
  b.raw = 1.0 - static_cast<double>(hypothesis_count - 1) * std::exp(-gap * gap * static_cast<double>(m) / 2.0);
  b.clamped = std::clamp(b.raw, 0.0, 1.0);
  return b;
}

ProbabilityBound erm_in_hstar_lower_bound(std::size_t hypothesis_count, const std::optional<Rational>& gap,
                                          std::size_t m) {
  if (!gap) throw ValidationError("no risk gap: every hypothesis is a risk minimizer");
  return erm_in_hstar_lower_bound(hypothesis_count, to_double(*gap), m);
}

double majority_vote_training_rate(std::size_t m) {
  if (m < 1) throw ValidationError("m must be at least 1");
  return 1.0 / std::sqrt(2.0 * std::numbers::pi * static_cast<double>(m));
}

double majority_vote_weak_rate(double p, std::size_t m) {
  if (!(p > 0.5) || p > 1.0) throw ValidationError("weak-stability rate needs 1/2 < p <= 1");
  const double s = 2.0 - 1.0 / p;
  return std::exp(-s * s * static_cast<double>(m) / 8.0);
}

Rational pair_mismatch_prob(const Rational& p) {
  check_probability(p);
  return p * p / 2;
}

}  // namespace ermstab
