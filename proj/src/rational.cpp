#include "ermstab/rational.hpp"

#include <cctype>

#include "ermstab/errors.hpp"

namespace ermstab {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw ValidationError("not a rational number: '" + std::string(whole) + "'");
  }
  BigInt v(std::string(s), 10);
  return negative ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ValidationError("empty rational number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) {
      throw ValidationError("not a rational number: '" + std::string(text) + "'");
    }
    BigInt den(std::string(den_text), 10);
    if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part))) {
      throw ValidationError("not a rational number: '" + std::string(text) + "'");
    }
    BigInt num(std::string(int_part.empty() ? "0" : int_part) + std::string(frac_part), 10);
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
    Rational q(negative ? BigInt(-num) : num, den);
    q.canonicalize();
    return q;
  }

  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

BigInt common_denominator(std::span<const Rational> values) {
  BigInt l = 1;
  for (const auto& v : values) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
  }
  return l;
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  if (k > n) return 0;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace ermstab
