#pragma once

#include <span>
#include <vector>

#include "subsig/domination.hpp"
#include "subsig/lifetime.hpp"
#include "subsig/structure.hpp"

namespace subsig {

/// M-signature: values[k-1] = Pr(T_C = T_{k:M}), the probability that the
/// k-th failure among the components of M is the one that kills the
/// system.
struct SubsignatureVector {
  ComponentSet set;
  std::vector<Rational> values;
  Rational total() const;
};

/// values[j-1] = Pr(T_C = T_j).
struct BarlowProschanVector {
  std::vector<Rational> values;
};

/// Replay of one failure ordering against a structure function.
struct FailureWalk {
  int death_position;          // 1-based index of the system-killing failure
  int killer;                  // component whose failure kills the system
  std::uint32_t failed_mask;   // components failed up to and including it
};

/// Removes components in failure order until phi drops to 0. This single
/// definition backs both the enumeration oracle and the Monte Carlo
/// estimators. Requires phi(C)=1 and phi(empty)=0.
FailureWalk walk_failures(const StructureFunction& phi, std::span<const std::uint8_t> order);

/// Ground-truth oracle: enumerates the explicit support, replays each
/// ordering and accumulates mass by the definitional event. Explicit
/// distributions only.
SubsignatureVector subsignature_oracle(const StructureFunction& phi,
                                       const OrderingDistribution& dist, ComponentSet m);

/// Sum over {A : |M\A| = k} of q_j(A) Delta_j phi(A) for j in M\A.
SubsignatureVector subsignature_direct(const StructureFunction& phi,
                                       const OrderingDistribution& dist, ComponentSet m);

/// Signed phi-weighted form of the same vector.
SubsignatureVector subsignature_phi_weighted(const StructureFunction& phi,
                                             const OrderingDistribution& dist, ComponentSet m);

/// Difference of q_M-down / q_M-up weighted partial sums of phi over the
/// levels |M & A| = m-k+1 and m-k.
SubsignatureVector subsignature_updown(const StructureFunction& phi,
                                       const OrderingDistribution& dist, ComponentSet m);

/// Linear expression through the signed domination function:
/// p_M^(k) = sum_A d(A) Pr(T_{k:M} = min_{i in A} T_i). Both the full and
/// the level-restricted sums are computed and must agree.
SubsignatureVector subsignature_domination(const DominationFunction& d,
                                           const OrderingDistribution& dist, ComponentSet m);

/// Probability signature (M = C); computed through the level-difference
/// q-weighted route and the delta-based route, which must agree.
SubsignatureVector probability_signature(const StructureFunction& phi,
                                         const OrderingDistribution& dist);

/// Barlow-Proschan importance; computed through q_j-weighted criticality
/// sums and through the domination route, which must agree.
BarlowProschanVector barlow_proschan(const StructureFunction& phi,
                                     const OrderingDistribution& dist);

/// Pr(T_C = T_j for some j in M) = sum_k p_M^(k) = sum_{j in M} I_BP^(j).
Rational failure_attribution(const StructureFunction& phi, const OrderingDistribution& dist,
                             ComponentSet m);

/// p_M^(k) / sum_l p_M^(l); throws NormalizationUndefined when the
/// attribution probability is zero.
std::vector<Rational> normalized_subsignature(const StructureFunction& phi,
                                              const OrderingDistribution& dist, ComponentSet m);

}  // namespace subsig
