#pragma once

#include <vector>

#include "subsig/rational.hpp"

namespace subsig {

/// Univariate polynomial with exact integer coefficients, coefficient of
/// t^i at index i. Used for reliability derivatives on the diagonal.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Integer> coefficients);

  /// Degree of the zero polynomial is -1.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Integer& coefficient(int power) const;
  const std::vector<Integer>& coefficients() const { return coeffs_; }

  Rational evaluate(const Rational& t) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

 private:
  void trim();
  std::vector<Integer> coeffs_;  // no trailing zeros
};

/// Exact value of the Euler integral of t^p (1-t)^q over [0,1]:
/// 1 / ((p+q+1) * C(p+q, p)).
Rational beta_integral(unsigned p, unsigned q);

/// Exact integral of `poly` over [0,1], term by term via beta_integral.
Rational integrate_unit(const Polynomial& poly);

/// Exact integral over [0,1] of poly(t) * r_{k,m}(t), where r_{k,m} is the
/// density of the Beta(m-k+1, k) distribution. Requires 1 <= k <= m.
Rational integrate_beta_weighted(const Polynomial& poly, unsigned k, unsigned m);

}  // namespace subsig
