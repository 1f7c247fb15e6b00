#pragma once

#include <cstdint>
#include <map>
#include <span>

#include "subsig/structure.hpp"

namespace subsig {

/// Signed domination function d: the coefficients of the unique
/// multilinear expression of phi, i.e. the Moebius transform of the
/// structure function. Stored sparsely (nonzero coefficients only).
class DominationFunction {
 public:
  DominationFunction(int n, std::map<std::uint32_t, long> coefficients);

  /// Moebius transform d(A) = sum_{B subseteq A} (-1)^{|A|-|B|} phi(B).
  static DominationFunction from_structure(const StructureFunction& phi);

  /// Inverse (zeta) transform phi(A) = sum_{B subseteq A} d(B). Throws
  /// SpecError naming the offending subset when the result is not
  /// {0,1}-valued.
  StructureFunction to_structure() const;

  int component_count() const { return n_; }
  long value(std::uint32_t mask) const;
  long value(ComponentSet a) const { return value(a.mask()); }
  const std::map<std::uint32_t, long>& coefficients() const { return coeffs_; }

  /// sum_A d(A); equals 1 exactly when phi(C) = 1.
  long coefficient_sum() const;

  /// True iff the zeta transform is {0,1}-valued.
  bool consistent() const;

  friend bool operator==(const DominationFunction&, const DominationFunction&) = default;

 private:
  int n_;
  std::map<std::uint32_t, long> coeffs_;
};

/// In-place subset-sum (zeta) transform over a dense table indexed by
/// subset mask; f[A] <- sum_{B subseteq A} f[B].
void zeta_transform(std::span<std::int32_t> table, int n);

/// In-place inverse subset-sum (Moebius) transform;
/// f[A] <- sum_{B subseteq A} (-1)^{|A|-|B|} f[B].
void mobius_transform(std::span<std::int32_t> table, int n);

}  // namespace subsig
