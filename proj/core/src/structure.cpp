#include "subsig/structure.hpp"

#include <bit>

#include "subsig/binomial.hpp"

namespace subsig {

std::string ValidationIssue::describe() const {
  switch (kind) {
    case Kind::EmptySetNotZero:
      return "phi(empty)=1";
    case Kind::FullSetNotOne:
      return "phi(C)=0";
    case Kind::NotMonotone:
      return "monotonicity violated: phi(" + subset.to_brace_string() + ")=1 > phi(" +
             superset.to_brace_string() + ")=0";
  }
  return "unknown issue";
}

void StructureFunction::check_count(int n) {
  if (n < 1 || n > kMaxComponents)
    throw CapabilityError("structure function needs 1.." + std::to_string(kMaxComponents) +
                          " components, got " + std::to_string(n));
}

StructureFunction::StructureFunction(int n, const std::function<bool(std::uint32_t)>& value_of)
    : n_(n) {
  check_count(n);
  const std::uint32_t size = std::uint32_t{1} << n;
  bits_.assign((size + 63) / 64, 0);
  for (std::uint32_t mask = 0; mask < size; ++mask)
    if (value_of(mask)) bits_[mask >> 6] |= std::uint64_t{1} << (mask & 63u);
}

StructureFunction StructureFunction::from_path_sets(int n,
                                                    const std::vector<ComponentSet>& path_sets) {
  check_count(n);
  const ComponentSet all = ComponentSet::full(n);
  for (ComponentSet p : path_sets) {
    if (p.empty()) throw SpecError("empty path set");
    if (!p.subset_of(all))
      throw SpecError("path set " + p.to_brace_string() + " outside 1.." + std::to_string(n));
  }
  return StructureFunction(n, [&](std::uint32_t mask) {
    for (ComponentSet p : path_sets)
      if ((mask & p.mask()) == p.mask()) return true;
    return false;
  });
}

StructureFunction StructureFunction::indicator(ComponentSet a, int n) {
  check_count(n);
  if (a.empty()) throw DomainError("indicator structure of the empty set");
  if (!a.subset_of(ComponentSet::full(n)))
    throw DomainError("indicator set " + a.to_brace_string() + " outside 1.." + std::to_string(n));
  const std::uint32_t need = a.mask();
  return StructureFunction(n, [need](std::uint32_t mask) { return (mask & need) == need; });
}

StructureFunction StructureFunction::series(int n) {
  return indicator(ComponentSet::full(n), n);
}

StructureFunction StructureFunction::parallel(int n) {
  check_count(n);
  return StructureFunction(n, [](std::uint32_t mask) { return mask != 0; });
}

StructureFunction StructureFunction::k_out_of_n(int k, int n) {
  check_count(n);
  if (k < 1 || k > n) throw DomainError("k-out-of-n requires 1 <= k <= n");
  return StructureFunction(
      n, [k](std::uint32_t mask) { return std::popcount(mask) >= k; });
}

int StructureFunction::delta(int j, ComponentSet a) const {
  if (a.contains(j))
    throw DomainError("delta: component " + std::to_string(j) + " already in " +
                      a.to_brace_string());
  if (j < 1 || j > n_) throw DomainError("delta: component index out of range");
  const std::uint32_t with = a.mask() | (std::uint32_t{1} << (j - 1));
  return static_cast<int>(value(with)) - static_cast<int>(value(a.mask()));
}

ValidationReport StructureFunction::validate_semicoherent() const {
  ValidationReport report;
  if (value(std::uint32_t{0}))
    report.issues.push_back({ValidationIssue::Kind::EmptySetNotZero, {}, {}});
  const std::uint32_t full = subset_count() - 1;
  if (!value(full))
    report.issues.push_back({ValidationIssue::Kind::FullSetNotOne, {}, {}});
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    if (!value(mask)) continue;
    // phi(mask)=1: every superset obtained by adding one component must be 1.
    std::uint32_t absent = full & ~mask;
    while (absent) {
      const std::uint32_t bit = absent & (~absent + 1);
      if (!value(mask | bit)) {
        report.issues.push_back({ValidationIssue::Kind::NotMonotone, ComponentSet(mask),
                                 ComponentSet(mask | bit)});
      }
      absent &= absent - 1;
    }
  }
  return report;
}

Rational StructureFunction::reliability(std::span<const Rational> x) const {
  if (static_cast<int>(x.size()) != n_)
    throw DomainError("reliability: expected " + std::to_string(n_) + " coordinates, got " +
                      std::to_string(x.size()));
  for (const Rational& xi : x)
    if (xi < 0 || xi > 1) throw DomainError("reliability: coordinate outside [0,1]");
  // Fold one variable at a time: v[A] <- (1-x_i) v[A] + x_i v[A u {i}].
  std::vector<Rational> v(subset_count());
  for (std::uint32_t mask = 0; mask < subset_count(); ++mask)
    if (value(mask)) v[mask] = 1;
  for (int i = n_; i >= 1; --i) {
    const std::uint32_t half = std::uint32_t{1} << (i - 1);
    const Rational& xi = x[static_cast<std::size_t>(i - 1)];
    const Rational co = 1 - xi;
    for (std::uint32_t mask = 0; mask < half; ++mask)
      v[mask] = co * v[mask] + xi * v[mask | half];
  }
  return v[0];
}

Polynomial StructureFunction::reliability_partial_diagonal(int j) const {
  if (j < 1 || j > n_) throw DomainError("partial derivative: component index out of range");
  // Sum_{B not containing j} t^{|B|} (1-t)^{n-1-|B|} Delta_j phi(B); the
  // counts per level are integers, expanded exactly afterwards.
  const int levels = n_;  // |B| in 0..n-1
  std::vector<long> level_delta(static_cast<std::size_t>(levels), 0);
  const std::uint32_t jbit = std::uint32_t{1} << (j - 1);
  for (std::uint32_t mask = 0; mask < subset_count(); ++mask) {
    if (mask & jbit) continue;
    const int d = static_cast<int>(value(mask | jbit)) - static_cast<int>(value(mask));
    level_delta[static_cast<std::size_t>(std::popcount(mask))] += d;
  }
  std::vector<Integer> coeffs(static_cast<std::size_t>(n_), 0);
  for (int b = 0; b < levels; ++b) {
    if (level_delta[static_cast<std::size_t>(b)] == 0) continue;
    const int q = n_ - 1 - b;  // power of (1-t)
    for (int r = 0; r <= q; ++r) {
      Integer term = binom(static_cast<unsigned>(q), static_cast<unsigned>(r));
      if (r & 1) term = -term;
      coeffs[static_cast<std::size_t>(b + r)] += term * level_delta[static_cast<std::size_t>(b)];
    }
  }
  return Polynomial(std::move(coeffs));
}

namespace {

struct ModuleIndexing {
  int n;                         // composed system size
  int m;                         // |M|
  std::vector<int> module_comps; // ascending components of M
  std::vector<int> reduced;      // ascending labels of (C\M) u {min M}
  int macro_pos;                 // 1-based position of min(M) in `reduced`
};

ModuleIndexing index_module(int psi_n, int chi_n, ComponentSet module_set) {
  ModuleIndexing ix;
  ix.m = module_set.count();
  if (ix.m != chi_n)
    throw DomainError("module structure has " + std::to_string(chi_n) +
                      " components but the modular set has " + std::to_string(ix.m));
  ix.n = psi_n - 1 + ix.m;
  if (ix.n < 1 || ix.n > kMaxComponents)
    throw CapabilityError("composed system has " + std::to_string(ix.n) + " components");
  if (!module_set.subset_of(ComponentSet::full(ix.n)))
    throw DomainError("modular set " + module_set.to_brace_string() + " outside 1.." +
                      std::to_string(ix.n));
  ix.module_comps = module_set.components();
  const int macro_label = module_set.smallest();
  ComponentSet rest = ComponentSet::full(ix.n) - module_set;
  ix.reduced = (rest | ComponentSet::of({macro_label})).components();
  ix.macro_pos = 0;
  for (std::size_t r = 0; r < ix.reduced.size(); ++r)
    if (ix.reduced[r] == macro_label) ix.macro_pos = static_cast<int>(r) + 1;
  return ix;
}

}  // namespace

StructureFunction compose_module(const StructureFunction& psi, const StructureFunction& chi,
                                 ComponentSet module_set) {
  const ModuleIndexing ix = index_module(psi.component_count(), chi.component_count(), module_set);
  return StructureFunction(ix.n, [&](std::uint32_t mask) {
    std::uint32_t chi_mask = 0;
    for (int t = 0; t < ix.m; ++t)
      if (mask & (std::uint32_t{1} << (ix.module_comps[static_cast<std::size_t>(t)] - 1)))
        chi_mask |= std::uint32_t{1} << t;
    const bool module_up = chi.value(chi_mask);
    std::uint32_t psi_mask = 0;
    for (std::size_t r = 0; r < ix.reduced.size(); ++r) {
      const bool up = (static_cast<int>(r) + 1 == ix.macro_pos)
                          ? module_up
                          : ((mask >> (ix.reduced[r] - 1)) & 1u) != 0;
      if (up) psi_mask |= std::uint32_t{1} << r;
    }
    return psi.value(psi_mask);
  });
}

bool check_module(const StructureFunction& phi, const StructureFunction& psi,
                  const StructureFunction& chi, ComponentSet module_set) {
  const StructureFunction composed = compose_module(psi, chi, module_set);
  if (composed.component_count() != phi.component_count())
    throw DomainError("component-set mismatch: composition yields " +
                      std::to_string(composed.component_count()) + " components, system has " +
                      std::to_string(phi.component_count()));
  return composed == phi;
}

StructureFunction derive_organizing(const StructureFunction& phi, ComponentSet module_set) {
  const int n = phi.component_count();
  if (module_set.empty() || !module_set.subset_of(ComponentSet::full(n)))
    throw DomainError("modular set must be a nonempty subset of 1.." + std::to_string(n));
  const int m = module_set.count();
  const ModuleIndexing ix = index_module(n - m + 1, m, module_set);
  return StructureFunction(n - m + 1, [&](std::uint32_t reduced_mask) {
    std::uint32_t full_mask = 0;
    for (std::size_t r = 0; r < ix.reduced.size(); ++r) {
      if (!((reduced_mask >> r) & 1u)) continue;
      if (static_cast<int>(r) + 1 == ix.macro_pos)
        full_mask |= module_set.mask();
      else
        full_mask |= std::uint32_t{1} << (ix.reduced[r] - 1);
    }
    return phi.value(full_mask);
  });
}

int ModuleDecomposition::macro_position() const {
  const ModuleIndexing ix =
      index_module(psi.component_count(), chi.component_count(), module_set);
  return ix.macro_pos;
}

std::vector<int> ModuleDecomposition::reduced_labels() const {
  const ModuleIndexing ix =
      index_module(psi.component_count(), chi.component_count(), module_set);
  return ix.reduced;
}

std::uint32_t ModuleDecomposition::reduced_mask(ComponentSet a) const {
  const ModuleIndexing ix =
      index_module(psi.component_count(), chi.component_count(), module_set);
  if (!(a & module_set).empty())
    throw DomainError("subset " + a.to_brace_string() + " intersects the modular set");
  std::uint32_t out = 0;
  for (std::size_t r = 0; r < ix.reduced.size(); ++r)
    if (static_cast<int>(r) + 1 != ix.macro_pos && a.contains(ix.reduced[r]))
      out |= std::uint32_t{1} << r;
  return out;
}

ModuleDecomposition make_module_decomposition(const StructureFunction& phi,
                                              ComponentSet module_set,
                                              const StructureFunction& chi) {
  ModuleDecomposition d{module_set, chi, derive_organizing(phi, module_set), false};
  d.validated = check_module(phi, d.psi, chi, module_set);
  return d;
}

}  // namespace subsig
