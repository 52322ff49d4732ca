#pragma once

// Exact rational scalars (GMP-backed) and their text forms.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qkcomp {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Always "p/q", even for integers ("-16/1"), so consumers never have to guess.
inline std::string to_fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// "p/q", or just "p" for integers; for human-facing labels only.
inline std::string to_compact_string(const Rational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : to_fraction_string(q);
}

/// Accepts "p/q" or "p" (optionally signed).
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  Rational q;
  try {
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad rational: " + s);
  }
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

/// Exact square root when q is the square of a rational.
inline std::optional<Rational> exact_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  mpz_class num = q.get_num(), den = q.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0)
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

inline Rational abs_value(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

inline Rational power(const Rational& base, int exponent) {
  Rational result = 1;
  Rational b = exponent < 0 ? Rational(1 / base) : base;
  for (int k = 0; k < (exponent < 0 ? -exponent : exponent); ++k) result *= b;
  return result;
}

}  // namespace qkcomp
