#include "subsig/polynomial.hpp"

#include <algorithm>

#include "subsig/binomial.hpp"

namespace subsig {

Polynomial::Polynomial(std::vector<Integer> coefficients) : coeffs_(std::move(coefficients)) {
  trim();
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const Integer& Polynomial::coefficient(int power) const {
  static const Integer zero = 0;
  if (power < 0 || power >= static_cast<int>(coeffs_.size())) return zero;
  return coeffs_[static_cast<std::size_t>(power)];
}

Rational Polynomial::evaluate(const Rational& t) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + Rational(*it);
  return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Integer> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < a.coeffs_.size()) out[i] += a.coeffs_[i];
    if (i < b.coeffs_.size()) out[i] += b.coeffs_[i];
  }
  return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.coeffs_.empty() || b.coeffs_.empty()) return Polynomial{};
  std::vector<Integer> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(out));
}

Rational beta_integral(unsigned p, unsigned q) {
  return make_rational(Integer(1), Integer(p + q + 1) * binom(p + q, p));
}

Rational integrate_unit(const Polynomial& poly) {
  Rational acc = 0;
  for (int i = 0; i <= poly.degree(); ++i)
    acc += Rational(poly.coefficient(i)) * beta_integral(static_cast<unsigned>(i), 0);
  return acc;
}

Rational integrate_beta_weighted(const Polynomial& poly, unsigned k, unsigned m) {
  if (k < 1 || k > m) throw DomainError("beta weight requires 1 <= k <= m");
  // r_{k,m}(t) = t^{m-k} (1-t)^{k-1} / B(m-k+1, k).
  const Rational norm = beta_integral(m - k, k - 1);
  Rational acc = 0;
  for (int i = 0; i <= poly.degree(); ++i)
    acc += Rational(poly.coefficient(i)) * beta_integral(m - k + static_cast<unsigned>(i), k - 1);
  return acc / norm;
}

}  // namespace subsig
