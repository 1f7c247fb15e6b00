#include "subsig/lifetime.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "subsig/binomial.hpp"

namespace subsig {

namespace {

constexpr int kEnumerationCap = 10;  // 10! ~ 3.6M orderings
constexpr int kDenseQueryLimit = 12;

Integer factorial(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

void check_ordering(const Ordering& order, int n) {
  if (static_cast<int>(order.size()) != n)
    throw DomainError("ordering has " + std::to_string(order.size()) + " entries, expected " +
                      std::to_string(n));
  std::uint32_t seen = 0;
  for (int c : order) {
    if (c < 1 || c > n) throw DomainError("ordering entry " + std::to_string(c) + " outside 1..n");
    const std::uint32_t bit = std::uint32_t{1} << (c - 1);
    if (seen & bit) throw DomainError("ordering repeats component " + std::to_string(c));
    seen |= bit;
  }
}

/// Aggregated one-pass views of an explicit support: q(A) and q_j(A) for
/// every subset that carries mass. Dense arrays up to kDenseQueryLimit
/// components, hash maps beyond (sparse supports only, in practice).
struct OrderingDistribution::QueryTables {
  bool dense = false;
  std::vector<Rational> q_dense;   // 2^n
  std::vector<Rational> qj_dense;  // n * 2^n, index ((j-1) << n) | mask
  std::unordered_map<std::uint32_t, Rational> q_sparse;
  std::unordered_map<std::uint64_t, Rational> qj_sparse;

  static std::uint64_t qj_key(int j, std::uint32_t mask) {
    return (std::uint64_t{static_cast<std::uint64_t>(j)} << 32) | mask;
  }

  QueryTables(int n, std::span<const std::uint8_t> flat, std::span<const Rational> mass) {
    dense = n <= kDenseQueryLimit;
    if (dense) {
      q_dense.assign(std::size_t{1} << n, Rational(0));
      qj_dense.assign(std::size_t{n} << n, Rational(0));
    }
    const std::size_t rows = mass.size();
    for (std::size_t row = 0; row < rows; ++row) {
      const std::uint8_t* order = flat.data() + row * static_cast<std::size_t>(n);
      const Rational& p = mass[row];
      // Walk from the last failure backwards; `suffix` is the survivor set
      // strictly after the current position.
      std::uint32_t suffix = 0;
      if (dense)
        q_dense[0] += p;
      else
        q_sparse[0] += p;
      for (int i = n - 1; i >= 0; --i) {
        const int j = order[i];
        if (dense)
          qj_dense[(std::size_t{static_cast<std::size_t>(j - 1)} << n) | suffix] += p;
        else
          qj_sparse[qj_key(j, suffix)] += p;
        suffix |= std::uint32_t{1} << (j - 1);
        if (dense)
          q_dense[suffix] += p;
        else
          q_sparse[suffix] += p;
      }
    }
  }

  Rational q(int /*n*/, std::uint32_t mask) const {
    if (dense) return q_dense[mask];
    const auto it = q_sparse.find(mask);
    return it == q_sparse.end() ? Rational(0) : it->second;
  }

  Rational qj(int n, int j, std::uint32_t mask) const {
    if (dense) return qj_dense[(std::size_t{static_cast<std::size_t>(j - 1)} << n) | mask];
    const auto it = qj_sparse.find(qj_key(j, mask));
    return it == qj_sparse.end() ? Rational(0) : it->second;
  }
};

const OrderingDistribution::QueryTables& OrderingDistribution::tables() const {
  return *tables_;
}

void OrderingDistribution::check_subset(ComponentSet a, const char* what) const {
  if (!a.subset_of(ComponentSet::full(n_)))
    throw DomainError(std::string(what) + ": subset " + a.to_brace_string() + " outside 1.." +
                      std::to_string(n_));
}

OrderingDistribution OrderingDistribution::exchangeable(int n) {
  if (n < 1 || n > kMaxComponents)
    throw CapabilityError("exchangeable distribution needs 1.." +
                          std::to_string(kMaxComponents) + " components");
  return OrderingDistribution(n, true);
}

OrderingDistribution OrderingDistribution::from_orderings(
    int n, const std::vector<std::pair<Ordering, Rational>>& entries) {
  if (n < 1 || n > kMaxComponents)
    throw CapabilityError("distribution needs 1.." + std::to_string(kMaxComponents) +
                          " components");
  OrderingDistribution dist(n, false);
  dist.flat_.reserve(entries.size() * static_cast<std::size_t>(n));
  dist.mass_.reserve(entries.size());
  std::map<std::vector<std::uint8_t>, bool> seen;
  Rational total = 0;
  for (const auto& [order, p] : entries) {
    check_ordering(order, n);
    if (p <= 0) throw SpecError("ordering probability must be positive");
    std::vector<std::uint8_t> row(order.begin(), order.end());
    if (!seen.emplace(row, true).second)
      throw SpecError("duplicate ordering in distribution");
    dist.flat_.insert(dist.flat_.end(), row.begin(), row.end());
    dist.mass_.push_back(p);
    total += p;
  }
  if (total != 1)
    throw SpecError("ordering probabilities sum to " + to_string(total) + ", expected 1");
  dist.tables_ = std::make_shared<QueryTables>(n, dist.flat_, dist.mass_);
  return dist;
}

OrderingDistribution OrderingDistribution::from_exponential_rates(
    const std::vector<Rational>& rates) {
  const int n = static_cast<int>(rates.size());
  if (n < 1 || n > kEnumerationCap)
    throw CapabilityError("exponential-rate materialization is capped at " +
                          std::to_string(kEnumerationCap) + " components, got " +
                          std::to_string(n));
  for (const Rational& r : rates)
    if (r <= 0) throw SpecError("exponential rates must be positive");

  OrderingDistribution dist(n, false);
  std::vector<std::uint8_t> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), std::uint8_t{1});
  std::vector<Rational> suffix(static_cast<std::size_t>(n) + 1);
  do {
    // Race law: Pr(sigma) = prod_k rate[sigma(k)] / sum_{i >= k} rate[sigma(i)].
    suffix[static_cast<std::size_t>(n)] = 0;
    for (int i = n - 1; i >= 0; --i)
      suffix[static_cast<std::size_t>(i)] =
          suffix[static_cast<std::size_t>(i) + 1] + rates[static_cast<std::size_t>(perm[i] - 1)];
    Rational p = 1;
    for (int i = 0; i < n; ++i)
      p *= rates[static_cast<std::size_t>(perm[i] - 1)] / suffix[static_cast<std::size_t>(i)];
    dist.flat_.insert(dist.flat_.end(), perm.begin(), perm.end());
    dist.mass_.push_back(std::move(p));
  } while (std::next_permutation(perm.begin(), perm.end()));
  dist.tables_ = std::make_shared<QueryTables>(n, dist.flat_, dist.mass_);
  return dist;
}

OrderingDistribution OrderingDistribution::materialize_uniform() const {
  if (n_ > kEnumerationCap)
    throw CapabilityError("uniform materialization is capped at " +
                          std::to_string(kEnumerationCap) + " components");
  if (!exchangeable_) throw DomainError("materialize_uniform on an explicit distribution");
  OrderingDistribution dist(n_, false);
  const Rational each = make_rational(Integer(1), factorial(n_));
  std::vector<std::uint8_t> perm(static_cast<std::size_t>(n_));
  std::iota(perm.begin(), perm.end(), std::uint8_t{1});
  do {
    dist.flat_.insert(dist.flat_.end(), perm.begin(), perm.end());
    dist.mass_.push_back(each);
  } while (std::next_permutation(perm.begin(), perm.end()));
  dist.tables_ = std::make_shared<QueryTables>(n_, dist.flat_, dist.mass_);
  return dist;
}

std::size_t OrderingDistribution::support_size() const {
  if (exchangeable_) throw CapabilityError("symbolic distribution has no materialized support");
  return mass_.size();
}

std::span<const std::uint8_t> OrderingDistribution::flat_orderings() const {
  if (exchangeable_) throw CapabilityError("symbolic distribution has no materialized support");
  return flat_;
}

std::span<const Rational> OrderingDistribution::masses() const {
  if (exchangeable_) throw CapabilityError("symbolic distribution has no materialized support");
  return mass_;
}

void OrderingDistribution::for_each_ordering(
    const std::function<void(std::span<const std::uint8_t>, const Rational&)>& fn) const {
  const auto flat = flat_orderings();
  for (std::size_t row = 0; row < mass_.size(); ++row)
    fn(flat.subspan(row *static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)), mass_[row]);
}

Rational OrderingDistribution::q(ComponentSet a) const {
  check_subset(a, "q");
  if (exchangeable_)
    return make_rational(Integer(1), binom(static_cast<unsigned>(n_),
                                           static_cast<unsigned>(a.count())));
  return tables().q(n_, a.mask());
}

Rational OrderingDistribution::q_component(int j, ComponentSet a) const {
  if (j < 1 || j > n_) throw DomainError("q_j: component index out of range");
  check_subset(a, "q_j");
  if (a.contains(j))
    throw DomainError("q_j: component " + std::to_string(j) + " lies in " + a.to_brace_string());
  if (exchangeable_)
    return make_rational(Integer(1), Integer(n_) * binom(static_cast<unsigned>(n_ - 1),
                                                         static_cast<unsigned>(a.count())));
  return tables().qj(n_, j, a.mask());
}

Rational OrderingDistribution::q_down(ComponentSet m, ComponentSet a) const {
  check_subset(m, "q_down");
  check_subset(a, "q_down");
  if (a.empty()) throw DomainError("q_down is undefined on the empty set");
  if (exchangeable_) {
    const int overlap = (m & a).count();
    return make_rational(Integer(overlap),
                         Integer(n_) * binom(static_cast<unsigned>(n_ - 1),
                                             static_cast<unsigned>(a.count() - 1)));
  }
  Rational sum = 0;
  for (int j : (m & a).components()) sum += q_component(j, a.without(j));
  return sum;
}

Rational OrderingDistribution::q_up(ComponentSet m, ComponentSet a) const {
  check_subset(m, "q_up");
  check_subset(a, "q_up");
  if (a == ComponentSet::full(n_)) throw DomainError("q_up is undefined on the full set");
  if (exchangeable_) {
    const int outside = (m - a).count();
    return make_rational(Integer(outside),
                         Integer(n_) * binom(static_cast<unsigned>(n_ - 1),
                                             static_cast<unsigned>(a.count())));
  }
  Rational sum = 0;
  for (int j : (m - a).components()) sum += q_component(j, a);
  return sum;
}

Rational OrderingDistribution::order_stat_min_prob(ComponentSet m, int k, ComponentSet a) const {
  check_subset(m, "order_stat_min_prob");
  check_subset(a, "order_stat_min_prob");
  if (m.empty() || a.empty())
    throw DomainError("order_stat_min_prob requires nonempty M and A");
  const int msize = m.count();
  if (k < 1 || k > msize) throw DomainError("order_stat_min_prob requires 1 <= k <= |M|");
  if (exchangeable_) {
    // Closed form under exchangeability with A split into A&M and A\M.
    const int a1 = (a & m).count();
    if (a1 == 0) return Rational(0);
    const int a2 = (a - m).count();
    const Integer num =
        Integer(a1) * binom(static_cast<unsigned>(msize - a1), static_cast<unsigned>(k - 1));
    const Integer den = Integer(msize + a2) * binom(static_cast<unsigned>(msize + a2 - 1),
                                                    static_cast<unsigned>(k - 1));
    return make_rational(num, den);
  }
  Rational total = 0;
  const auto flat = flat_orderings();
  for (std::size_t row = 0; row < mass_.size(); ++row) {
    const std::uint8_t* order = flat.data() + row * static_cast<std::size_t>(n_);
    int seen_m = 0;
    bool seen_a = false;
    for (int i = 0; i < n_; ++i) {
      const int c = order[i];
      const bool in_m = m.contains(c);
      const bool in_a = a.contains(c);
      if (in_m && ++seen_m == k) {
        if (in_a && !seen_a) total += mass_[row];
        break;
      }
      if (in_a) seen_a = true;
    }
  }
  return total;
}

OrderingDistribution OrderingDistribution::marginalize(ComponentSet m) const {
  check_subset(m, "marginalize");
  if (m.empty()) throw DomainError("marginalize to the empty set");
  const int msize = m.count();
  if (exchangeable_) return exchangeable(msize);

  // Rank components of M by ascending label for the relabeled system.
  std::vector<int> rank(static_cast<std::size_t>(n_) + 1, 0);
  {
    int next = 1;
    for (int c : m.components()) rank[static_cast<std::size_t>(c)] = next++;
  }
  std::map<std::vector<std::uint8_t>, Rational> merged;
  const auto flat = flat_orderings();
  std::vector<std::uint8_t> key;
  for (std::size_t row = 0; row < mass_.size(); ++row) {
    const std::uint8_t* order = flat.data() + row * static_cast<std::size_t>(n_);
    key.clear();
    for (int i = 0; i < n_; ++i)
      if (m.contains(order[i]))
        key.push_back(static_cast<std::uint8_t>(rank[order[i]]));
    merged[key] += mass_[row];
  }
  OrderingDistribution dist(msize, false);
  for (const auto& [row, p] : merged) {
    dist.flat_.insert(dist.flat_.end(), row.begin(), row.end());
    dist.mass_.push_back(p);
  }
  dist.tables_ = std::make_shared<QueryTables>(msize, dist.flat_, dist.mass_);
  return dist;
}

}  // namespace subsig
