#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subsig/monte_carlo.hpp"
#include "subsig/structure.hpp"

namespace subsig {

/// A parsed system specification file: component count, structure
/// function, lifetime model and optional declared modules.
///
/// The lifetime block determines which engines are available:
///  - "exchangeable", "orderings": exact ordering law only;
///  - "exponential" (exact rational rates): exact law by materializing the
///    race probabilities (n <= 10) and a sampling model;
///  - "iid_exponential", "gamma_mixture": sampling model plus the exact
///    exchangeable law they induce on orderings;
///  - "independent_exponential": sampling model only.
struct SystemSpec {
  struct DeclaredModule {
    ComponentSet set;
    StructureFunction chi;
    std::string chi_formula;
  };

  int n = 0;
  StructureFunction structure;
  std::string structure_formula;  // empty when given as path sets
  std::string lifetime_kind;
  std::optional<OrderingDistribution> exact_direct;
  std::vector<Rational> exponential_rates;  // kind == "exponential"
  std::optional<ContinuousLifetimeModel> continuous;
  std::vector<DeclaredModule> modules;

  bool has_exact() const { return exact_direct.has_value() || !exponential_rates.empty(); }

  /// The exact ordering distribution. Materializes exponential rates on
  /// demand (throws CapabilityError beyond the enumeration cap) and
  /// throws SpecError when the lifetime block carries no exact law.
  OrderingDistribution exact_distribution() const;
};

/// Parses and validates a system spec from JSON text. Unknown fields and
/// schema violations raise SpecError; cap violations raise
/// CapabilityError. The structure must be semicoherent.
SystemSpec parse_system_spec(const std::string& json_text);

/// Reads the file and delegates to parse_system_spec.
SystemSpec load_system_spec(const std::string& path);

inline constexpr int kSpecVersion = 1;

}  // namespace subsig
