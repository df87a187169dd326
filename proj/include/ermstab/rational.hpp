#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>

namespace ermstab {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "a/b", a signed integer, or a plain decimal such as "0.7" into an
/// exact rational. Decimals are read digit by digit, so "0.7" is 7/10.
Rational parse_rational(std::string_view text);

/// Canonical text form: "a" for integers, "a/b" otherwise.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Least common multiple of the denominators (1 for an empty span).
BigInt common_denominator(std::span<const Rational> values);

/// Exact binomial coefficient C(n, k); zero when k > n.
BigInt binomial(unsigned long n, unsigned long k);

}  // namespace ermstab
