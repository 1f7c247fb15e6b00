#pragma once

// Shared helpers for the test suites: exhaustive monotone-function
// enumeration (n <= 6 as 2^n-bit tables), deterministic random structure
// and distribution generators, and a modular-set scanner.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "subsig/lifetime.hpp"
#include "subsig/structure.hpp"

namespace testutil {

using subsig::ComponentSet;
using subsig::ModuleDecomposition;
using subsig::Ordering;
using subsig::OrderingDistribution;
using subsig::Rational;
using subsig::StructureFunction;

/// Deterministic splitmix64 generator for reproducible tests.
struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }
};

/// All monotone tables on n variables (including the two constants),
/// packed as 2^n bits: bit A = phi(A). Built by the pairing
/// phi = (g on x_n=0, h on x_n=1) with g <= h pointwise.
inline std::vector<std::uint64_t> monotone_tables_all(int n) {
  std::vector<std::uint64_t> tables{0ULL, 1ULL};  // n = 0
  for (int v = 1; v <= n; ++v) {
    const int half = 1 << (v - 1);
    std::vector<std::uint64_t> next;
    for (std::uint64_t g : tables)
      for (std::uint64_t h : tables)
        if ((g & ~h) == 0) next.push_back(g | (h << half));
    tables = std::move(next);
  }
  return tables;
}

/// Semicoherent tables only: phi(empty)=0, phi(C)=1.
inline std::vector<std::uint64_t> semicoherent_tables(int n) {
  std::vector<std::uint64_t> out;
  const std::uint64_t top = std::uint64_t{1} << ((1 << n) - 1);
  for (std::uint64_t t : monotone_tables_all(n))
    if (!(t & 1) && (t & top)) out.push_back(t);
  return out;
}

inline StructureFunction from_bits(int n, std::uint64_t bits) {
  return StructureFunction(n, [bits](std::uint32_t mask) { return (bits >> mask) & 1u; });
}

inline std::uint64_t to_bits(const StructureFunction& phi) {
  std::uint64_t bits = 0;
  for (std::uint32_t mask = 0; mask < phi.subset_count(); ++mask)
    if (phi.value(mask)) bits |= std::uint64_t{1} << mask;
  return bits;
}

/// Random semicoherent structure as a union of random path sets.
inline StructureFunction random_semicoherent(int n, TestRng& rng) {
  const std::size_t count = 1 + rng.below(static_cast<std::uint64_t>(2 * n));
  std::vector<ComponentSet> paths;
  for (std::size_t i = 0; i < count; ++i)
    paths.push_back(ComponentSet(
        static_cast<std::uint32_t>(1 + rng.below((std::uint64_t{1} << n) - 1))));
  return StructureFunction::from_path_sets(n, paths);
}

inline std::vector<Ordering> all_orderings(int n) {
  Ordering perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<Ordering> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

inline OrderingDistribution uniform_explicit(int n) {
  const auto orderings = all_orderings(n);
  const Rational each = subsig::make_rational(1, static_cast<long>(orderings.size()));
  std::vector<std::pair<Ordering, Rational>> entries;
  for (const Ordering& o : orderings) entries.emplace_back(o, each);
  return OrderingDistribution::from_orderings(n, entries);
}

inline OrderingDistribution single_ordering(int n, const Ordering& order) {
  return OrderingDistribution::from_orderings(n, {{order, Rational(1)}});
}

inline Ordering random_ordering(int n, TestRng& rng) {
  Ordering perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[rng.below(static_cast<std::uint64_t>(i + 1))]);
  return perm;
}

/// Random explicit distribution with small random rational weights;
/// max_support = 0 materializes the full n! support.
inline OrderingDistribution random_explicit(int n, TestRng& rng, std::size_t max_support = 0) {
  std::vector<Ordering> support;
  if (max_support == 0) {
    support = all_orderings(n);
  } else {
    std::map<Ordering, bool> seen;
    while (seen.size() < max_support) seen.emplace(random_ordering(n, rng), true);
    for (const auto& [o, _] : seen) support.push_back(o);
  }
  std::vector<long> weights(support.size());
  long total = 0;
  for (long& w : weights) total += (w = 1 + static_cast<long>(rng.below(9)));
  std::vector<std::pair<Ordering, Rational>> entries;
  for (std::size_t i = 0; i < support.size(); ++i)
    entries.emplace_back(support[i], subsig::make_rational(weights[i], total));
  return OrderingDistribution::from_orderings(n, entries);
}

/// Scans every M with min_size <= |M| <= n for modularity: M is modular
/// iff the restrictions of phi to M (one per state of C\M) are all
/// constant or equal to a single structure chi. Returns validated
/// decompositions. Where the module is irrelevant (all restrictions
/// constant) any chi works; a series module is used. Requires n <= 6.
inline std::vector<ModuleDecomposition> find_decompositions(const StructureFunction& phi,
                                                            int min_size = 1) {
  const int n = phi.component_count();
  std::vector<ModuleDecomposition> out;
  for (std::uint32_t m_mask = 1; m_mask < (std::uint32_t{1} << n); ++m_mask) {
    const ComponentSet m(m_mask);
    const int msize = m.count();
    if (msize < min_size) continue;
    const std::vector<int> comps = m.components();
    std::uint64_t chi_bits = 0;
    bool have_chi = false, modular = true;
    for (std::uint32_t rest = 0; rest < (std::uint32_t{1} << n) && modular; ++rest) {
      if (rest & m_mask) continue;  // states of C\M only
      std::uint64_t bits = 0;
      for (std::uint32_t local = 0; local < (std::uint32_t{1} << msize); ++local) {
        std::uint32_t global = rest;
        for (int t = 0; t < msize; ++t)
          if (local & (std::uint32_t{1} << t))
            global |= std::uint32_t{1} << (comps[static_cast<std::size_t>(t)] - 1);
        if (phi.value(global)) bits |= std::uint64_t{1} << local;
      }
      const std::uint64_t full = (std::uint64_t{1} << (1 << msize)) - 1;
      if (bits == 0 || bits == full) continue;  // constant restriction
      if (!have_chi) {
        chi_bits = bits;
        have_chi = true;
      } else if (bits != chi_bits) {
        modular = false;
      }
    }
    if (!modular) continue;
    const StructureFunction chi =
        have_chi ? from_bits(msize, chi_bits) : StructureFunction::series(msize);
    ModuleDecomposition decomp = make_module_decomposition(phi, m, chi);
    if (!decomp.validated) continue;  // restriction was not monotone-composable
    out.push_back(std::move(decomp));
  }
  return out;
}

}  // namespace testutil
