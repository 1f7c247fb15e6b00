#pragma once

#include <gmpxx.h>

#include <string>

#include "subsig/errors.hpp"

namespace subsig {

/// Exact arbitrary-precision rational. All probabilities in the exact
/// engines are of this type; no floating point enters those paths.
using Rational = mpq_class;
using Integer = mpz_class;

/// num/den with canonicalization (mpq_class alone does not canonicalize).
inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "num", "-num" or "num/den" (decimal-free). Throws SpecError on
/// anything else, including zero denominators.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw SpecError("empty rational literal");
  std::size_t i = text[0] == '-' || text[0] == '+' ? 1 : 0;
  bool seen_digit = false, seen_slash = false, den_digit = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      (seen_slash ? den_digit : seen_digit) = true;
    } else if (c == '/' && !seen_slash && seen_digit) {
      seen_slash = true;
    } else {
      throw SpecError("invalid rational literal: " + text);
    }
  }
  if (!seen_digit || (seen_slash && !den_digit))
    throw SpecError("invalid rational literal: " + text);
  Rational r;
  if (r.set_str(text, 10) != 0) throw SpecError("invalid rational literal: " + text);
  if (r.get_den() == 0) throw SpecError("zero denominator: " + text);
  r.canonicalize();
  return r;
}

/// Canonical "num/den" form; whole numbers render without a denominator.
inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace subsig
