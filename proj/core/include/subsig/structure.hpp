#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "subsig/component_set.hpp"
#include "subsig/polynomial.hpp"
#include "subsig/rational.hpp"

namespace subsig {

/// One violated semicoherence condition.
struct ValidationIssue {
  enum class Kind { EmptySetNotZero, FullSetNotOne, NotMonotone };
  Kind kind;
  ComponentSet subset;    // witness A for NotMonotone
  ComponentSet superset;  // witness B with A subset of B, phi(A) > phi(B)
  std::string describe() const;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

/// A structure function phi : 2^C -> {0,1} on n <= 24 components, stored
/// as a dense bit table indexed by subset mask. Immutable after
/// construction; all member queries are pure.
class StructureFunction {
 public:
  /// Builds the table by evaluating `value_of` on every subset mask.
  StructureFunction(int n, const std::function<bool(std::uint32_t)>& value_of);

  /// phi(A) = 1 iff A contains at least one of the given path sets.
  /// Every path set must be nonempty and within 1..n.
  static StructureFunction from_path_sets(int n, const std::vector<ComponentSet>& path_sets);

  /// Indicator structure phi_A(B) = 1 iff A is a subset of B. A nonempty.
  static StructureFunction indicator(ComponentSet a, int n);

  static StructureFunction series(int n);
  static StructureFunction parallel(int n);
  static StructureFunction k_out_of_n(int k, int n);

  int component_count() const { return n_; }
  std::uint32_t subset_count() const { return std::uint32_t{1} << n_; }

  bool value(std::uint32_t mask) const {
    return (bits_[mask >> 6] >> (mask & 63u)) & 1u;
  }
  bool value(ComponentSet a) const { return value(a.mask()); }

  /// Discrete derivative phi(A u {j}) - phi(A); 1 iff component j is
  /// critical with respect to A. Requires j not in A.
  int delta(int j, ComponentSet a) const;

  /// Lists every violated semicoherence condition (empty report = valid).
  ValidationReport validate_semicoherent() const;
  bool is_semicoherent() const { return validate_semicoherent().ok(); }

  /// Exact multilinear reliability h_phi(x); coordinates must lie in [0,1].
  Rational reliability(std::span<const Rational> x) const;

  /// Coefficients of the partial derivative of h_phi with respect to x_j,
  /// evaluated on the diagonal (t,...,t).
  Polynomial reliability_partial_diagonal(int j) const;

  friend bool operator==(const StructureFunction& a, const StructureFunction& b) {
    return a.n_ == b.n_ && a.bits_ == b.bits_;
  }

 private:
  StructureFunction(int n, std::vector<std::uint64_t> bits)
      : n_(n), bits_(std::move(bits)) {}
  static void check_count(int n);

  int n_;
  std::vector<std::uint64_t> bits_;
};

/// Composition phi(x) = psi(chi(x^M), x^{C\M}).
///
/// chi is indexed by the components of M in ascending order; psi is
/// indexed by the components of (C\M) u {[M]} in ascending label order,
/// where the macro-component [M] carries the label min(M). The result has
/// n = |M| + (psi components - 1) components.
StructureFunction compose_module(const StructureFunction& psi, const StructureFunction& chi,
                                 ComponentSet module_set);

/// True iff compose_module(psi, chi, M) reproduces phi on every subset.
bool check_module(const StructureFunction& phi, const StructureFunction& psi,
                  const StructureFunction& chi, ComponentSet module_set);

/// The organizing structure induced by collapsing M to one macro
/// component: psi(B) = phi(B with the macro bit expanded to all of M).
/// This is the unique candidate psi for a decomposition of phi at M.
StructureFunction derive_organizing(const StructureFunction& phi, ComponentSet module_set);

/// A declared module (M, chi) together with the organizing structure psi
/// of the reduced system C_M = (C\M) u {[M]}.
struct ModuleDecomposition {
  ComponentSet module_set;
  StructureFunction chi;  // on |M| components
  StructureFunction psi;  // on n - |M| + 1 components
  bool validated = false;

  int system_size() const { return module_set.count() + psi.component_count() - 1; }
  /// 1-based index of [M] within psi (rank of min(M) among reduced labels).
  int macro_position() const;
  /// Original labels of the reduced system in ascending order; the entry
  /// at macro_position() is min(M) standing for [M].
  std::vector<int> reduced_labels() const;
  /// Reduced-system subset mask for A subset of C\M (macro bit clear).
  std::uint32_t reduced_mask(ComponentSet a) const;
};

/// Derives psi from phi and runs check_module to set `validated`.
ModuleDecomposition make_module_decomposition(const StructureFunction& phi,
                                              ComponentSet module_set,
                                              const StructureFunction& chi);

}  // namespace subsig
