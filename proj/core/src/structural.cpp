#include "subsig/structural.hpp"

#include <bit>
#include <cassert>

#include "subsig/binomial.hpp"

namespace subsig {

namespace {

void check_set(ComponentSet m, int n, const char* what) {
  if (m.empty()) throw DomainError(std::string(what) + ": M must be nonempty");
  if (!m.subset_of(ComponentSet::full(n)))
    throw DomainError(std::string(what) + ": M outside 1.." + std::to_string(n));
}

void check_semicoherent(const StructureFunction& phi, const char* what) {
  if (!phi.is_semicoherent())
    throw DomainError(std::string(what) + ": structure function is not semicoherent");
}

/// w[a] = 1 / (n C(n-1, a)), the exchangeable weight of q_j at |A| = a.
std::vector<Rational> qj_level_weights(int n) {
  std::vector<Rational> w;
  w.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a <= n - 1; ++a)
    w.push_back(make_rational(
        Integer(1), Integer(n) * binom(static_cast<unsigned>(n - 1), static_cast<unsigned>(a))));
  return w;
}

}  // namespace

Rational StructuralSubsignature::total() const {
  Rational sum = 0;
  for (const Rational& v : values) sum += v;
  return sum;
}

StructuralSubsignature structural_subsignature_delta(const StructureFunction& phi,
                                                     ComponentSet m) {
  check_set(m, phi.component_count(), "structural_subsignature");
  check_semicoherent(phi, "structural_subsignature");
  const auto w = qj_level_weights(phi.component_count());
  const int msize = m.count();
  StructuralSubsignature out{m, std::vector<Rational>(static_cast<std::size_t>(msize), Rational(0))};
  for (std::uint32_t mask = 0; mask < phi.subset_count(); ++mask) {
    if (phi.value(mask)) continue;
    std::uint32_t rem = m.mask() & ~mask;
    const int k = std::popcount(rem);
    if (k == 0) continue;
    int critical = 0;
    for (; rem != 0; rem &= rem - 1)
      if (phi.value(mask | (rem & (~rem + 1)))) ++critical;
    if (critical > 0)
      out.values[static_cast<std::size_t>(k - 1)] +=
          Rational(critical) * w[static_cast<std::size_t>(std::popcount(mask))];
  }
  return out;
}

StructuralSubsignature structural_subsignature_signed(const StructureFunction& phi,
                                                      ComponentSet m) {
  check_set(m, phi.component_count(), "structural_subsignature");
  check_semicoherent(phi, "structural_subsignature");
  const auto w = qj_level_weights(phi.component_count());
  const int msize = m.count();
  StructuralSubsignature out{m, std::vector<Rational>(static_cast<std::size_t>(msize), Rational(0))};
  for (std::uint32_t mask = 0; mask < phi.subset_count(); ++mask) {
    if (!phi.value(mask)) continue;
    const int outside = std::popcount(m.mask() & ~mask);
    const int size = std::popcount(mask);
    for (std::uint32_t rem = m.mask(); rem != 0; rem &= rem - 1) {
      const std::uint32_t jbit = rem & (~rem + 1);
      if (mask & jbit)
        out.values[static_cast<std::size_t>(outside)] += w[static_cast<std::size_t>(size - 1)];
      else if (outside >= 1)
        out.values[static_cast<std::size_t>(outside - 1)] -= w[static_cast<std::size_t>(size)];
    }
  }
  return out;
}

StructuralSubsignature structural_subsignature_levels(const StructureFunction& phi,
                                                      ComponentSet m) {
  check_set(m, phi.component_count(), "structural_subsignature");
  check_semicoherent(phi, "structural_subsignature");
  const int n = phi.component_count();
  const auto w = qj_level_weights(n);
  const int msize = m.count();
  StructuralSubsignature out{m, std::vector<Rational>(static_cast<std::size_t>(msize), Rational(0))};
  for (std::uint32_t mask = 0; mask < phi.subset_count(); ++mask) {
    if (!phi.value(mask)) continue;
    const int overlap = std::popcount(m.mask() & mask);
    const int size = std::popcount(mask);
    if (overlap >= 1)  // k = m - overlap + 1, weight (m-k+1) / (n C(n-1, |A|-1))
      out.values[static_cast<std::size_t>(msize - overlap)] +=
          Rational(overlap) * w[static_cast<std::size_t>(size - 1)];
    if (overlap <= msize - 1)  // k = m - overlap, weight k / (n C(n-1, |A|))
      out.values[static_cast<std::size_t>(msize - overlap - 1)] -=
          Rational(msize - overlap) * w[static_cast<std::size_t>(size)];
  }
  return out;
}

StructuralSubsignature structural_subsignature(const StructureFunction& phi, ComponentSet m) {
  StructuralSubsignature out = structural_subsignature_delta(phi, m);
#ifndef NDEBUG
  assert(structural_subsignature_signed(phi, m).values == out.values);
  assert(structural_subsignature_levels(phi, m).values == out.values);
#endif
  return out;
}

std::vector<Rational> structural_signature(const StructureFunction& phi) {
  check_semicoherent(phi, "structural_signature");
  const int n = phi.component_count();

  // Level-difference form: s_k = S[n-k+1] - S[n-k], S[l] = sum phi / C(n,l).
  std::vector<long> count_per_level(static_cast<std::size_t>(n) + 1, 0);
  for (std::uint32_t mask = 0; mask < phi.subset_count(); ++mask)
    if (phi.value(mask)) ++count_per_level[static_cast<std::size_t>(std::popcount(mask))];
  std::vector<Rational> by_levels;
  by_levels.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const int hi = n - k + 1, lo = n - k;
    by_levels.push_back(
        make_rational(Integer(count_per_level[static_cast<std::size_t>(hi)]),
                      binom(static_cast<unsigned>(n), static_cast<unsigned>(hi))) -
        make_rational(Integer(count_per_level[static_cast<std::size_t>(lo)]),
                      binom(static_cast<unsigned>(n), static_cast<unsigned>(lo))));
  }

  const std::vector<Rational> by_delta =
      structural_subsignature_delta(phi, ComponentSet::full(n)).values;
  if (by_levels != by_delta)
    throw std::logic_error("structural signature: level and delta routes disagree");
  return by_levels;
}

std::vector<Rational> structural_bp(const StructureFunction& phi) {
  check_semicoherent(phi, "structural_bp");
  const int n = phi.component_count();
  const auto w = qj_level_weights(n);
  std::vector<Rational> out(static_cast<std::size_t>(n), Rational(0));
  for (std::uint32_t mask = 0; mask < phi.subset_count(); ++mask) {
    if (phi.value(mask)) continue;
    std::uint32_t rem = ~mask & (phi.subset_count() - 1);
    for (; rem != 0; rem &= rem - 1) {
      const std::uint32_t jbit = rem & (~rem + 1);
      if (phi.value(mask | jbit))
        out[static_cast<std::size_t>(std::countr_zero(jbit))] +=
            w[static_cast<std::size_t>(std::popcount(mask))];
    }
  }
  return out;
}

StructuralSubsignature structural_subsignature_domination(const DominationFunction& d,
                                                          ComponentSet m) {
  check_set(m, d.component_count(), "structural_subsignature_domination");
  d.to_structure();  // consistency
  const int msize = m.count();
  StructuralSubsignature out{m, std::vector<Rational>(static_cast<std::size_t>(msize), Rational(0))};
  std::vector<Rational> restricted(static_cast<std::size_t>(msize), Rational(0));
  for (const auto& [mask, coef] : d.coefficients()) {
    const int u = std::popcount(m.mask() & ~mask);  // |M \ A|
    const int size = std::popcount(mask);
    if (u == msize) continue;  // factor m - |M\A| vanishes
    for (int k = 1; k <= msize; ++k) {
      const Integer num = Integer(coef) * Integer(msize - u) *
                          binom(static_cast<unsigned>(u), static_cast<unsigned>(k - 1));
      if (num == 0) continue;
      const Integer den =
          Integer(k) * binom(static_cast<unsigned>(u + size), static_cast<unsigned>(k));
      const Rational term = make_rational(num, den);
      out.values[static_cast<std::size_t>(k - 1)] += term;
      if (k - 1 <= u && u <= msize - 1)
        restricted[static_cast<std::size_t>(k - 1)] += term;
    }
  }
  if (restricted != out.values)
    throw std::logic_error("structural domination route: restricted and full sums disagree");
  return out;
}

std::vector<Rational> structural_signature_domination(const DominationFunction& d) {
  d.to_structure();
  const int n = d.component_count();
  std::vector<Rational> out(static_cast<std::size_t>(n), Rational(0));
  for (const auto& [mask, coef] : d.coefficients()) {
    const int size = std::popcount(mask);
    if (size == 0) continue;
    for (int k = 1; k <= n - size + 1; ++k) {
      const Integer num = Integer(coef) * Integer(size) *
                          binom(static_cast<unsigned>(n - size), static_cast<unsigned>(k - 1));
      if (num == 0) continue;
      const Integer den =
          Integer(k) * binom(static_cast<unsigned>(n), static_cast<unsigned>(k));
      out[static_cast<std::size_t>(k - 1)] += make_rational(num, den);
    }
  }
  return out;
}

std::vector<Rational> structural_bp_domination(const DominationFunction& d) {
  d.to_structure();
  const int n = d.component_count();
  std::vector<Rational> out(static_cast<std::size_t>(n), Rational(0));
  for (const auto& [mask, coef] : d.coefficients()) {
    const int size = std::popcount(mask);
    if (size == 0) continue;
    const Rational share = make_rational(Integer(coef), Integer(size));
    for (std::uint32_t rem = mask; rem != 0; rem &= rem - 1)
      out[static_cast<std::size_t>(std::countr_zero(rem & (~rem + 1)))] += share;
  }
  return out;
}

}  // namespace subsig
