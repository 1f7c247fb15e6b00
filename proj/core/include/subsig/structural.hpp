#pragma once

#include <vector>

#include "subsig/domination.hpp"
#include "subsig/polynomial.hpp"
#include "subsig/structure.hpp"

namespace subsig {

/// Distribution-free M-signature: the value of p_M under any exchangeable
/// lifetime law, computed purely from the structure function.
struct StructuralSubsignature {
  ComponentSet set;
  std::vector<Rational> values;
  Rational total() const;
};

/// Delta-weighted closed form of s_M^(k) (the release-path route).
/// In debug builds the two alternative forms below are recomputed and
/// verified to agree exactly.
StructuralSubsignature structural_subsignature(const StructureFunction& phi, ComponentSet m);

/// The three equivalent closed forms, individually exposed for
/// cross-route verification.
StructuralSubsignature structural_subsignature_delta(const StructureFunction& phi,
                                                     ComponentSet m);
StructuralSubsignature structural_subsignature_signed(const StructureFunction& phi,
                                                      ComponentSet m);
StructuralSubsignature structural_subsignature_levels(const StructureFunction& phi,
                                                      ComponentSet m);

/// Structural signature (s_1..s_n): level-difference form and the
/// delta-based form are both computed and must agree.
std::vector<Rational> structural_signature(const StructureFunction& phi);

/// Structural Barlow-Proschan index (b_1..b_n).
std::vector<Rational> structural_bp(const StructureFunction& phi);

/// s_M^(k) through the signed domination function; the level-restricted
/// and unrestricted sums are both computed and must agree.
StructuralSubsignature structural_subsignature_domination(const DominationFunction& d,
                                                          ComponentSet m);

/// s_k and b_j through the signed domination function.
std::vector<Rational> structural_signature_domination(const DominationFunction& d);
std::vector<Rational> structural_bp_domination(const DominationFunction& d);

}  // namespace subsig
