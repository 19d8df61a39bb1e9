#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dualfair/errors.hpp"

namespace dualfair {

/// Exact rational number.  All value computations in this library are exact:
/// no floating point is used anywhere a fairness verdict or an objective
/// value depends on it.  GMP-backed rationals are always stored canonically
/// (lowest terms, positive denominator), which the comparison and arithmetic
/// operators rely on.
using Rational = boost::multiprecision::mpq_rational;

/// Arbitrary-precision integer, used for numerators/denominators and counts.
using Integer = boost::multiprecision::mpz_int;

/// Dense matrix of exact rationals (row-major).
using RationalMatrix = std::vector<std::vector<Rational>>;

namespace detail {

inline Integer parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) {
    throw FormatError("empty integer in rational literal '" + std::string(whole) + "'");
  }
  std::size_t start = (text[0] == '+' || text[0] == '-') ? 1 : 0;
  if (start == text.size()) {
    throw FormatError("sign without digits in rational literal '" + std::string(whole) + "'");
  }
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw FormatError("invalid digit in rational literal '" + std::string(whole) + "'");
    }
  }
  Integer magnitude{std::string(text.substr(start))};
  return text[0] == '-' ? Integer(-magnitude) : magnitude;
}

}  // namespace detail

/// Parses "p" or "p/q" into an exact rational.  Whitespace is not accepted;
/// q must be nonzero.  The result is canonical regardless of the input
/// (e.g. "2/4" becomes 1/2, "1/-2" becomes -1/2).  Construction goes through
/// integer components on purpose: the underlying two-argument rational
/// constructor does not canonicalize string input and mishandles negative
/// denominators.
inline Rational parse_rational(std::string_view text) {
  const std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(detail::parse_integer(text, text));
  }
  Integer num = detail::parse_integer(text.substr(0, slash), text);
  Integer den = detail::parse_integer(text.substr(slash + 1), text);
  if (den == 0) {
    throw FormatError("zero denominator in rational literal '" + std::string(text) + "'");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);  // mpz-pair construction canonicalizes
}

/// Renders a rational as "p" (denominator one) or "p/q".  Inverse of
/// parse_rational on canonical values.
inline std::string rational_to_string(const Rational& value) {
  if (denominator(value) == 1) {
    return numerator(value).str();
  }
  return numerator(value).str() + "/" + denominator(value).str();
}

/// Floor of p/q as an integer (works for negative values).
inline Integer rational_floor(const Rational& value) {
  Integer num = numerator(value);
  Integer den = denominator(value);
  Integer q = num / den;           // truncates toward zero
  if (num < 0 && q * den != num) {
    --q;
  }
  return q;
}

/// Ceiling of p/q as an integer (works for negative values).
inline Integer rational_ceil(const Rational& value) {
  return -rational_floor(-value);
}

}  // namespace dualfair
