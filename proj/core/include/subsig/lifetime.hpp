#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "subsig/component_set.hpp"
#include "subsig/rational.hpp"

namespace subsig {

/// A failure ordering: order[i] is the component with the (i+1)-th
/// smallest lifetime, i.e. T_{order[0]} < T_{order[1]} < ...
using Ordering = std::vector<int>;

/// Throws DomainError unless `order` is a permutation of 1..n.
void check_ordering(const Ordering& order, int n);

/// The distribution of the ranking of the component lifetimes. Under the
/// no-ties assumption this is a sufficient statistic for every exact
/// quantity computed by this library: the joint lifetime law F enters
/// only through it.
///
/// Two representations:
///  - Explicit: a sparse list of orderings with positive rational mass
///    summing to one (n! entries at most; sparse support is fine).
///  - Exchangeable: symbolic uniform law over all n! orderings; queries
///    are answered by closed-form binomial expressions and the n!
///    orderings are never materialized.
///
/// Immutable after construction; queries are pure and thread-safe.
class OrderingDistribution {
 public:
  /// Symbolic uniform distribution, 1 <= n <= 24.
  static OrderingDistribution exchangeable(int n);

  /// Explicit distribution from (ordering, probability) pairs. Orderings
  /// must be distinct permutations of 1..n, probabilities positive and
  /// summing to exactly 1.
  static OrderingDistribution from_orderings(
      int n, const std::vector<std::pair<Ordering, Rational>>& entries);

  /// Independent exponential lifetimes with the given positive rates;
  /// materializes the exact race probabilities over all n! orderings,
  /// so n is capped at 10.
  static OrderingDistribution from_exponential_rates(const std::vector<Rational>& rates);

  int component_count() const { return n_; }
  bool symbolic_exchangeable() const { return exchangeable_; }
  /// True when the support can be enumerated (Explicit representation).
  bool enumerable() const { return !exchangeable_; }
  std::size_t support_size() const;

  /// Explicit support access: row i of flat_orderings() spans
  /// [i*n, (i+1)*n) and lists component labels in failure order.
  /// Throws CapabilityError on symbolic distributions.
  std::span<const std::uint8_t> flat_orderings() const;
  std::span<const Rational> masses() const;
  void for_each_ordering(
      const std::function<void(std::span<const std::uint8_t>, const Rational&)>& fn) const;

  /// Materializes the uniform law over all n! orderings (n <= 10); used
  /// when an enumeration oracle must run against an exchangeable model.
  OrderingDistribution materialize_uniform() const;

  /// q(A): probability that the best |A| components are precisely A.
  /// q(empty) = q(C) = 1.
  Rational q(ComponentSet a) const;

  /// q_j(A): probability that the components better than j are precisely
  /// A. Requires j not in A.
  Rational q_component(int j, ComponentSet a) const;

  /// q_M-down(A) = sum_{j in M by intersection A} q_j(A \ {j}); A nonempty.
  Rational q_down(ComponentSet m, ComponentSet a) const;

  /// q_M-up(A) = sum_{j in M \ A} q_j(A); A proper subset of C.
  Rational q_up(ComponentSet m, ComponentSet a) const;

  /// Pr(T_{k:M} = min_{i in A} T_i): the k-th failure within M is the
  /// first failure within A. M, A nonempty; 1 <= k <= |M|.
  Rational order_stat_min_prob(ComponentSet m, int k, ComponentSet a) const;

  /// The law of the failure ranking restricted to M, components relabeled
  /// 1..|M| by ascending original label.
  OrderingDistribution marginalize(ComponentSet m) const;

 private:
  OrderingDistribution(int n, bool exchangeable) : n_(n), exchangeable_(exchangeable) {}

  struct QueryTables;
  const QueryTables& tables() const;
  void check_subset(ComponentSet a, const char* what) const;

  int n_;
  bool exchangeable_;
  std::vector<std::uint8_t> flat_;  // support * n component labels
  std::vector<Rational> mass_;
  std::shared_ptr<QueryTables> tables_;  // built lazily, thread-safe
};

}  // namespace subsig
