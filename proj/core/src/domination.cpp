#include "subsig/domination.hpp"

#include <vector>

namespace subsig {

void zeta_transform(std::span<std::int32_t> table, int n) {
  const std::size_t size = std::size_t{1} << n;
  for (int i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t mask = 0; mask < size; ++mask)
      if (mask & bit) table[mask] += table[mask ^ bit];
  }
}

void mobius_transform(std::span<std::int32_t> table, int n) {
  const std::size_t size = std::size_t{1} << n;
  for (int i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t mask = 0; mask < size; ++mask)
      if (mask & bit) table[mask] -= table[mask ^ bit];
  }
}

DominationFunction::DominationFunction(int n, std::map<std::uint32_t, long> coefficients)
    : n_(n), coeffs_(std::move(coefficients)) {
  if (n < 1 || n > kMaxComponents)
    throw CapabilityError("domination function needs 1.." + std::to_string(kMaxComponents) +
                          " components");
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (it->first > full)
      throw DomainError("domination coefficient for subset outside the component range");
    it = it->second == 0 ? coeffs_.erase(it) : std::next(it);
  }
}

DominationFunction DominationFunction::from_structure(const StructureFunction& phi) {
  const int n = phi.component_count();
  std::vector<std::int32_t> table(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < phi.subset_count(); ++mask)
    table[mask] = phi.value(mask) ? 1 : 0;
  mobius_transform(table, n);
  std::map<std::uint32_t, long> coeffs;
  for (std::uint32_t mask = 0; mask < phi.subset_count(); ++mask)
    if (table[mask] != 0) coeffs.emplace(mask, table[mask]);
  return DominationFunction(n, std::move(coeffs));
}

StructureFunction DominationFunction::to_structure() const {
  std::vector<std::int32_t> table(std::size_t{1} << n_, 0);
  for (const auto& [mask, d] : coeffs_) {
    if (d < INT32_MIN || d > INT32_MAX) throw SpecError("domination coefficient out of range");
    table[mask] = static_cast<std::int32_t>(d);
  }
  zeta_transform(table, n_);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n_); ++mask)
    if (table[mask] != 0 && table[mask] != 1)
      throw SpecError("domination function is inconsistent: phi(" +
                      ComponentSet(mask).to_brace_string() + ") = " +
                      std::to_string(table[mask]));
  return StructureFunction(n_, [&](std::uint32_t mask) { return table[mask] == 1; });
}

long DominationFunction::value(std::uint32_t mask) const {
  const auto it = coeffs_.find(mask);
  return it == coeffs_.end() ? 0 : it->second;
}

long DominationFunction::coefficient_sum() const {
  long sum = 0;
  for (const auto& [mask, d] : coeffs_) sum += d;
  return sum;
}

bool DominationFunction::consistent() const {
  try {
    to_structure();
    return true;
  } catch (const SpecError&) {
    return false;
  }
}

}  // namespace subsig
