#include "subsig/signature.hpp"

#include <bit>

#include "subsig/binomial.hpp"

namespace subsig {

namespace {

void check_pair(const StructureFunction& phi, const OrderingDistribution& dist) {
  if (phi.component_count() != dist.component_count())
    throw DomainError("structure on " + std::to_string(phi.component_count()) +
                      " components, distribution on " + std::to_string(dist.component_count()));
}

void check_set(ComponentSet m, int n, const char* what) {
  if (m.empty()) throw DomainError(std::string(what) + ": M must be nonempty");
  if (!m.subset_of(ComponentSet::full(n)))
    throw DomainError(std::string(what) + ": M outside 1.." + std::to_string(n));
}

void check_semicoherent(const StructureFunction& phi, const char* what) {
  if (!phi.is_semicoherent())
    throw DomainError(std::string(what) + ": structure function is not semicoherent");
}

/// q_j(A) accessor with a per-level fast path for exchangeable laws,
/// where the value depends on |A| only.
class QjView {
 public:
  QjView(const OrderingDistribution& dist) : dist_(dist) {
    if (dist.symbolic_exchangeable()) {
      const int n = dist.component_count();
      levels_.reserve(static_cast<std::size_t>(n));
      for (int a = 0; a <= n - 1; ++a)
        levels_.push_back(make_rational(
            Integer(1),
            Integer(n) * binom(static_cast<unsigned>(n - 1), static_cast<unsigned>(a))));
    }
  }

  Rational operator()(int j, std::uint32_t a_mask) const {
    if (!levels_.empty()) return levels_[static_cast<std::size_t>(std::popcount(a_mask))];
    return dist_.q_component(j, ComponentSet(a_mask));
  }

  /// q_M-down / q_M-up without per-j dispatch in the exchangeable case.
  Rational down(ComponentSet m, std::uint32_t a_mask) const {
    if (!levels_.empty())
      return Rational(std::popcount(m.mask() & a_mask)) *
             levels_[static_cast<std::size_t>(std::popcount(a_mask) - 1)];
    return dist_.q_down(m, ComponentSet(a_mask));
  }
  Rational up(ComponentSet m, std::uint32_t a_mask) const {
    if (!levels_.empty())
      return Rational(std::popcount(m.mask() & ~a_mask)) *
             levels_[static_cast<std::size_t>(std::popcount(a_mask))];
    return dist_.q_up(m, ComponentSet(a_mask));
  }

 private:
  const OrderingDistribution& dist_;
  std::vector<Rational> levels_;
};

}  // namespace

Rational SubsignatureVector::total() const {
  Rational sum = 0;
  for (const Rational& v : values) sum += v;
  return sum;
}

FailureWalk walk_failures(const StructureFunction& phi, std::span<const std::uint8_t> order) {
  const int n = phi.component_count();
  std::uint32_t alive = (std::uint32_t{1} << n) - 1;
  if (!phi.value(alive)) throw DomainError("walk_failures: phi(C) = 0");
  for (int i = 0; i < n; ++i) {
    const int c = order[static_cast<std::size_t>(i)];
    alive &= ~(std::uint32_t{1} << (c - 1));
    if (!phi.value(alive))
      return {i + 1, c, ((std::uint32_t{1} << n) - 1) & ~alive};
  }
  throw DomainError("walk_failures: phi(empty) = 1");
}

SubsignatureVector subsignature_oracle(const StructureFunction& phi,
                                       const OrderingDistribution& dist, ComponentSet m) {
  check_pair(phi, dist);
  check_set(m, phi.component_count(), "subsignature_oracle");
  check_semicoherent(phi, "subsignature_oracle");
  if (!dist.enumerable())
    throw CapabilityError(
        "subsignature_oracle needs an explicit distribution; materialize or use closed forms");
  const int n = phi.component_count();
  SubsignatureVector out{m, std::vector<Rational>(static_cast<std::size_t>(m.count()), Rational(0))};
  const auto flat = dist.flat_orderings();
  const auto mass = dist.masses();
  for (std::size_t row = 0; row < mass.size(); ++row) {
    const FailureWalk walk =
        walk_failures(phi, flat.subspan(row * static_cast<std::size_t>(n),
                                        static_cast<std::size_t>(n)));
    if (!m.contains(walk.killer)) continue;
    const int k = std::popcount(walk.failed_mask & m.mask());
    out.values[static_cast<std::size_t>(k - 1)] += mass[row];
  }
  return out;
}

SubsignatureVector subsignature_direct(const StructureFunction& phi,
                                       const OrderingDistribution& dist, ComponentSet m) {
  check_pair(phi, dist);
  check_set(m, phi.component_count(), "subsignature_direct");
  check_semicoherent(phi, "subsignature_direct");
  const QjView qj(dist);
  const int msize = m.count();
  SubsignatureVector out{m, std::vector<Rational>(static_cast<std::size_t>(msize), Rational(0))};
  for (std::uint32_t mask = 0; mask < phi.subset_count(); ++mask) {
    if (phi.value(mask)) continue;  // Delta_j phi(A) = 1 needs phi(A) = 0
    std::uint32_t rem = m.mask() & ~mask;
    const int k = std::popcount(rem);
    if (k == 0) continue;
    for (; rem != 0; rem &= rem - 1) {
      const std::uint32_t jbit = rem & (~rem + 1);
      if (phi.value(mask | jbit))
        out.values[static_cast<std::size_t>(k - 1)] +=
            qj(std::countr_zero(jbit) + 1, mask);
    }
  }
  return out;
}

SubsignatureVector subsignature_phi_weighted(const StructureFunction& phi,
                                             const OrderingDistribution& dist, ComponentSet m) {
  check_pair(phi, dist);
  check_set(m, phi.component_count(), "subsignature_phi_weighted");
  check_semicoherent(phi, "subsignature_phi_weighted");
  const QjView qj(dist);
  const int msize = m.count();
  SubsignatureVector out{m, std::vector<Rational>(static_cast<std::size_t>(msize), Rational(0))};
  for (std::uint32_t mask = 0; mask < phi.subset_count(); ++mask) {
    if (!phi.value(mask)) continue;
    const int outside = std::popcount(m.mask() & ~mask);
    for (std::uint32_t rem = m.mask(); rem != 0; rem &= rem - 1) {
      const std::uint32_t jbit = rem & (~rem + 1);
      const int j = std::countr_zero(jbit) + 1;
      if (mask & jbit) {
        // j in A: sign +, index k = |M\A| + 1, weight q_j(A \ {j}).
        out.values[static_cast<std::size_t>(outside)] += qj(j, mask & ~jbit);
      } else if (outside >= 1) {
        // j not in A: sign -, index k = |M\A|.
        out.values[static_cast<std::size_t>(outside - 1)] -= qj(j, mask);
      }
    }
  }
  return out;
}

SubsignatureVector subsignature_updown(const StructureFunction& phi,
                                       const OrderingDistribution& dist, ComponentSet m) {
  check_pair(phi, dist);
  check_set(m, phi.component_count(), "subsignature_updown");
  check_semicoherent(phi, "subsignature_updown");
  const QjView qj(dist);
  const int msize = m.count();
  SubsignatureVector out{m, std::vector<Rational>(static_cast<std::size_t>(msize), Rational(0))};
  for (std::uint32_t mask = 0; mask < phi.subset_count(); ++mask) {
    if (!phi.value(mask)) continue;
    const int overlap = std::popcount(m.mask() & mask);
    if (overlap >= 1)  // contributes to k = m - overlap + 1 with q_M-down
      out.values[static_cast<std::size_t>(msize - overlap)] += qj.down(m, mask);
    if (overlap <= msize - 1)  // contributes to k = m - overlap with q_M-up
      out.values[static_cast<std::size_t>(msize - overlap - 1)] -= qj.up(m, mask);
  }
  return out;
}

SubsignatureVector subsignature_domination(const DominationFunction& d,
                                           const OrderingDistribution& dist, ComponentSet m) {
  if (d.component_count() != dist.component_count())
    throw DomainError("domination function and distribution component counts differ");
  check_set(m, d.component_count(), "subsignature_domination");
  d.to_structure();  // throws SpecError when the zeta transform is not {0,1}
  const int msize = m.count();
  SubsignatureVector out{m, std::vector<Rational>(static_cast<std::size_t>(msize), Rational(0))};
  std::vector<Rational> restricted(static_cast<std::size_t>(msize), Rational(0));
  for (const auto& [mask, coef] : d.coefficients()) {
    if (mask == 0) continue;  // min over the empty set is never attained
    const ComponentSet a(mask);
    const int overlap = std::popcount(m.mask() & mask);
    for (int k = 1; k <= msize; ++k) {
      const Rational p = dist.order_stat_min_prob(m, k, a);
      if (p == 0) continue;
      const Rational term = Rational(coef) * p;
      out.values[static_cast<std::size_t>(k - 1)] += term;
      if (overlap <= msize - k + 1) restricted[static_cast<std::size_t>(k - 1)] += term;
    }
  }
  if (restricted != out.values)
    throw std::logic_error("domination route: restricted and full sums disagree");
  return out;
}

SubsignatureVector probability_signature(const StructureFunction& phi,
                                         const OrderingDistribution& dist) {
  check_pair(phi, dist);
  check_semicoherent(phi, "probability_signature");
  const int n = phi.component_count();
  const ComponentSet full = ComponentSet::full(n);

  // Level sums S[l] = sum_{|A|=l} q(A) phi(A); p_k = S[n-k+1] - S[n-k].
  std::vector<Rational> level_sum(static_cast<std::size_t>(n) + 1, Rational(0));
  std::vector<Rational> q_level;
  if (dist.symbolic_exchangeable()) {
    q_level.reserve(static_cast<std::size_t>(n) + 1);
    for (int a = 0; a <= n; ++a)
      q_level.push_back(make_rational(
          Integer(1), binom(static_cast<unsigned>(n), static_cast<unsigned>(a))));
  }
  for (std::uint32_t mask = 0; mask < phi.subset_count(); ++mask) {
    if (!phi.value(mask)) continue;
    const int size = std::popcount(mask);
    level_sum[static_cast<std::size_t>(size)] +=
        q_level.empty() ? dist.q(ComponentSet(mask)) : q_level[static_cast<std::size_t>(size)];
  }
  SubsignatureVector by_levels{full, {}};
  by_levels.values.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k)
    by_levels.values.push_back(level_sum[static_cast<std::size_t>(n - k + 1)] -
                               level_sum[static_cast<std::size_t>(n - k)]);

  const SubsignatureVector by_delta = subsignature_direct(phi, dist, full);
  if (by_levels.values != by_delta.values)
    throw std::logic_error("probability signature: level route and delta route disagree");
  return by_levels;
}

BarlowProschanVector barlow_proschan(const StructureFunction& phi,
                                     const OrderingDistribution& dist) {
  check_pair(phi, dist);
  check_semicoherent(phi, "barlow_proschan");
  const int n = phi.component_count();
  const QjView qj(dist);
  BarlowProschanVector out{std::vector<Rational>(static_cast<std::size_t>(n), Rational(0))};
  for (std::uint32_t mask = 0; mask < phi.subset_count(); ++mask) {
    if (phi.value(mask)) continue;
    std::uint32_t rem = ~mask & (phi.subset_count() - 1);
    for (; rem != 0; rem &= rem - 1) {
      const std::uint32_t jbit = rem & (~rem + 1);
      if (phi.value(mask | jbit))
        out.values[static_cast<std::size_t>(std::countr_zero(jbit))] +=
            qj(std::countr_zero(jbit) + 1, mask);
    }
  }

  // Cross-check through the signed domination function.
  const DominationFunction d = DominationFunction::from_structure(phi);
  std::vector<Rational> by_domination(static_cast<std::size_t>(n), Rational(0));
  for (const auto& [mask, coef] : d.coefficients()) {
    if (mask == 0) continue;
    const ComponentSet a(mask);
    for (int j = 1; j <= n; ++j) {
      const Rational p = dist.order_stat_min_prob(ComponentSet::of({j}), 1, a);
      if (p != 0) by_domination[static_cast<std::size_t>(j - 1)] += Rational(coef) * p;
    }
  }
  if (by_domination != out.values)
    throw std::logic_error("Barlow-Proschan: direct and domination routes disagree");
  return out;
}

Rational failure_attribution(const StructureFunction& phi, const OrderingDistribution& dist,
                             ComponentSet m) {
  check_pair(phi, dist);
  check_set(m, phi.component_count(), "failure_attribution");
  check_semicoherent(phi, "failure_attribution");
  const QjView qj(dist);
  Rational acc = 0;
  for (std::uint32_t mask = 0; mask < phi.subset_count(); ++mask) {
    if (phi.value(mask)) continue;
    for (std::uint32_t rem = m.mask() & ~mask; rem != 0; rem &= rem - 1) {
      const std::uint32_t jbit = rem & (~rem + 1);
      if (phi.value(mask | jbit)) acc += qj(std::countr_zero(jbit) + 1, mask);
    }
  }
  return acc;
}

std::vector<Rational> normalized_subsignature(const StructureFunction& phi,
                                              const OrderingDistribution& dist, ComponentSet m) {
  SubsignatureVector sub = subsignature_direct(phi, dist, m);
  const Rational total = sub.total();
  if (total == 0)
    throw NormalizationUndefined("normalized subsignature of " + m.to_brace_string() +
                                 ": attribution probability is zero");
  for (Rational& v : sub.values) v /= total;
  return std::move(sub.values);
}

}  // namespace subsig
