#pragma once

#include <map>
#include <optional>
#include <vector>

#include "subsig/signature.hpp"
#include "subsig/structural.hpp"

namespace subsig {

/// Relative quality function of the macro component [M] in the reduced
/// system: q_[M](A) = Pr(max_{i in C\(M u A)} T_i < T_M < min_{i in A} T_i)
/// for A subset of C\M. Unlike q_j it depends on the module structure chi
/// through the module lifetime T_M.
struct ReducedQualityFunction {
  ComponentSet module_set;
  std::map<std::uint32_t, Rational> values;  // key: mask of A (original labels)
  Rational value(ComponentSet a) const;
};

struct FactorizationWitness {
  int j1 = 0, j2 = 0;
  ComponentSet a1, a2, b;
};

/// Outcome of checking the ratio hypothesis q_j(A u B)/q_j^M(A) ==
/// q_j'(A' u B)/q_j'^M(A') across all admissible (j, A), (j', A'), B.
struct FactorizationReport {
  bool holds = false;
  std::optional<FactorizationWitness> witness;  // present iff !holds
  /// factors[k-1] = Pr(T_C = T_{k:M} | T_M = T_{k:M}) as the ratio-weighted
  /// sum over Delta_[M] psi; absent when level m-k carries no admissible
  /// pair (then p_k^M = 0 and the factor is irrelevant).
  std::vector<std::optional<Rational>> factors;
};

struct AssumptionViolated : Error {
  AssumptionViolated(const std::string& what, FactorizationWitness w)
      : Error(what), witness(w) {}
  FactorizationWitness witness;
};

/// Which failure kills the module: given the failure order of the module
/// components (local indices 1..m), returns the 1-based position of the
/// module-killing failure.
int module_lifetime_position(const StructureFunction& chi, const std::vector<int>& local_order);

/// Enumerates the explicit support, locating T_M in each ordering.
/// Requires an enumerable distribution and a validated decomposition.
ReducedQualityFunction reduced_quality(const OrderingDistribution& dist,
                                       const ModuleDecomposition& decomp);

/// Pr(T_C = T_M) = sum_{A subseteq C\M} q_[M](A) Delta_[M] psi(A); equals
/// failure_attribution(phi, dist, M) of the composed system.
Rational module_attribution(const OrderingDistribution& dist, const ModuleDecomposition& decomp);

/// Signature of the module as a standalone system under the marginal
/// failure-ranking law of M.
SubsignatureVector module_signature(const StructureFunction& chi,
                                    const OrderingDistribution& dist, ComponentSet m);

/// Checks the ratio hypothesis constructively; exchangeable distributions
/// short-circuit to holds=true with closed-form ratios.
FactorizationReport factorization_check(const OrderingDistribution& dist,
                                        const ModuleDecomposition& decomp);

/// p_M^(k) = p_k^M * factor_k. Throws AssumptionViolated (with witness)
/// when factorization_check fails.
SubsignatureVector subsignature_via_module(const OrderingDistribution& dist,
                                           const ModuleDecomposition& decomp);

/// Integral form of Pr(T_C = T_M): the [0,1] integral of the diagonal
/// partial derivative of h_psi at the macro component. Valid when the
/// reduced-system quality function is the exchangeable one.
Rational exchangeable_module_attribution(const ModuleDecomposition& decomp);

/// s_M^(k) = s_k^M * integral of r_{k,m} times the diagonal partial
/// derivative of h_psi; exact via the beta identity. Valid under
/// exchangeable component lifetimes.
StructuralSubsignature exchangeable_module_subsignature(const ModuleDecomposition& decomp);

}  // namespace subsig
