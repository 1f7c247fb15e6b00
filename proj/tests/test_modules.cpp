#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>

#include "subsig/formula.hpp"
#include "subsig/modules.hpp"
#include "testutil.hpp"

using namespace subsig;
using testutil::TestRng;

namespace {

ComponentSet cs(std::initializer_list<int> components) { return ComponentSet::of(components); }

std::vector<Rational> rat(std::initializer_list<std::pair<long, long>> values) {
  std::vector<Rational> out;
  for (auto [num, den] : values) out.push_back(make_rational(num, den));
  return out;
}

/// The four-component system with the series module on {3,4}.
struct WorkedExample {
  StructureFunction phi = parse_structure("x1&(x2|(x3&x4))", 4);
  ModuleDecomposition decomp =
      make_module_decomposition(phi, ComponentSet::of({3, 4}), StructureFunction::series(2));
};

}  // namespace

TEST_CASE("module lifetime position") {
  CHECK(module_lifetime_position(StructureFunction::series(2), {1, 2}) == 1);
  CHECK(module_lifetime_position(StructureFunction::series(2), {2, 1}) == 1);
  CHECK(module_lifetime_position(StructureFunction::parallel(2), {1, 2}) == 2);
  CHECK(module_lifetime_position(StructureFunction::parallel(2), {2, 1}) == 2);
  const StructureFunction two_of_three = StructureFunction::k_out_of_n(2, 3);
  for (const Ordering& order : testutil::all_orderings(3))
    CHECK(module_lifetime_position(two_of_three, order) == 2);
}

TEST_CASE("reduced quality function of the worked example") {
  WorkedExample ex;
  REQUIRE(ex.decomp.validated);
  const ReducedQualityFunction rq = reduced_quality(testutil::uniform_explicit(4), ex.decomp);
  // Pr(T_2 < min(T_3,T_4) < T_1): survivors of C\M after the module dies = {1}.
  CHECK(rq.value(cs({1})) == make_rational(1, 6));
  Rational total = 0;
  for (const auto& [mask, p] : rq.values) total += p;
  CHECK(total == 1);

  CHECK_THROWS_AS(reduced_quality(OrderingDistribution::exchangeable(4), ex.decomp),
                  CapabilityError);
}

TEST_CASE("module attribution equals the explicit four-ordering sum") {
  WorkedExample ex;
  const OrderingDistribution uniform = testutil::uniform_explicit(4);
  CHECK(module_attribution(uniform, ex.decomp) == make_rational(1, 6));

  // Pr(T2<T3<T1<T4) + Pr(T2<T3<T4<T1) + Pr(T2<T4<T1<T3) + Pr(T2<T4<T3<T1).
  TestRng rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const OrderingDistribution dist = testutil::random_explicit(4, rng);
    Rational listed = 0;
    const auto flat = dist.flat_orderings();
    for (std::size_t row = 0; row < dist.support_size(); ++row) {
      const std::uint8_t* o = flat.data() + row * 4;
      const bool matches = o[0] == 2 && ((o[1] == 3 && (o[2] == 1 || o[2] == 4)) ||
                                         (o[1] == 4 && (o[2] == 1 || o[2] == 3)));
      if (matches) listed += dist.masses()[row];
    }
    CHECK(module_attribution(dist, ex.decomp) == listed);
    CHECK(failure_attribution(ex.phi, dist, cs({3, 4})) == listed);
  }
}

TEST_CASE("module attribution edge cases") {
  WorkedExample ex;
  // M = C: chi = phi, psi = the bare macro component.
  const ModuleDecomposition whole =
      make_module_decomposition(ex.phi, ComponentSet::full(4), ex.phi);
  REQUIRE(whole.validated);
  CHECK(module_attribution(testutil::uniform_explicit(4), whole) == 1);

  // Irrelevant module: psi ignores the macro component.
  const StructureFunction phi = parse_structure("x1 & x2", 4);  // 3,4 irrelevant
  const ModuleDecomposition irrelevant =
      make_module_decomposition(phi, cs({3, 4}), StructureFunction::series(2));
  REQUIRE(irrelevant.validated);
  CHECK(module_attribution(testutil::uniform_explicit(4), irrelevant) == 0);

  ModuleDecomposition invalid = ex.decomp;
  invalid.validated = false;
  CHECK_THROWS_AS(module_attribution(testutil::uniform_explicit(4), invalid), DomainError);
}

TEST_CASE("module signature basics") {
  const OrderingDistribution ex4 = OrderingDistribution::exchangeable(4);
  CHECK(module_signature(StructureFunction::series(2), ex4, cs({3, 4})).values ==
        rat({{1, 1}, {0, 1}}));
  CHECK(module_signature(StructureFunction::parallel(2), ex4, cs({3, 4})).values ==
        rat({{0, 1}, {1, 1}}));

  TestRng rng(11);
  const OrderingDistribution dist = testutil::random_explicit(5, rng);
  CHECK(module_signature(StructureFunction::k_out_of_n(2, 3), dist, cs({1, 3, 5})).values ==
        rat({{0, 1}, {1, 1}, {0, 1}}));
}

TEST_CASE("factorization holds under exchangeability with the closed-form factor") {
  WorkedExample ex;
  const FactorizationReport report =
      factorization_check(OrderingDistribution::exchangeable(4), ex.decomp);
  CHECK(report.holds);
  CHECK_FALSE(report.witness.has_value());
  REQUIRE(report.factors.size() == 2);
  CHECK(*report.factors[0] == make_rational(1, 6));
  CHECK(*report.factors[1] == make_rational(1, 6));
}

TEST_CASE("factorization violation carries a witness") {
  WorkedExample ex;
  // Two orderings that break the ratio equality at level |A| = 1, B = {1}:
  // under <3,1,2,4> only j=3 has mass, under <2,4,3,1> only j=4 does, and
  // the survivor patterns differ.
  const OrderingDistribution dist = OrderingDistribution::from_orderings(
      4, {{{3, 1, 2, 4}, make_rational(1, 2)}, {{2, 4, 3, 1}, make_rational(1, 2)}});
  const FactorizationReport report = factorization_check(dist, ex.decomp);
  CHECK_FALSE(report.holds);
  REQUIRE(report.witness.has_value());
  const FactorizationWitness w = *report.witness;
  CHECK(w.j1 != w.j2);
  CHECK(w.a1.count() == w.a2.count());
  // Direct ratio computation at the witness.
  const OrderingDistribution marginal = dist.marginalize(cs({3, 4}));
  auto local = [&](ComponentSet global) {
    ComponentSet out;
    int rank = 1;
    for (int c : cs({3, 4}).components()) {
      if (global.contains(c)) out = out.with(rank);
      ++rank;
    }
    return out;
  };
  auto local_j = [&](int j) { return j == 3 ? 1 : 2; };
  const Rational r1 = dist.q_component(w.j1, (w.a1 | w.b)) /
                      marginal.q_component(local_j(w.j1), local(w.a1));
  const Rational r2 = dist.q_component(w.j2, (w.a2 | w.b)) /
                      marginal.q_component(local_j(w.j2), local(w.a2));
  CHECK(r1 != r2);

  CHECK_THROWS_AS(subsignature_via_module(dist, ex.decomp), AssumptionViolated);

  // A single ordering admits one admissible pair per level, so the
  // hypothesis holds vacuously.
  const FactorizationReport vacuous =
      factorization_check(testutil::single_ordering(4, {3, 1, 2, 4}), ex.decomp);
  CHECK(vacuous.holds);
}

TEST_CASE("subsignature through the module factorization") {
  WorkedExample ex;
  const OrderingDistribution exch = OrderingDistribution::exchangeable(4);
  const SubsignatureVector via = subsignature_via_module(exch, ex.decomp);
  CHECK(via.values == rat({{1, 6}, {0, 1}}));
  CHECK(via.values == subsignature_direct(ex.phi, exch, cs({3, 4})).values);

  // Exhaustive agreement for all modules of all semicoherent systems, n <= 4.
  for (int n = 2; n <= 4; ++n) {
    const OrderingDistribution ex_n = OrderingDistribution::exchangeable(n);
    const OrderingDistribution uniform = testutil::uniform_explicit(n);
    for (std::uint64_t bits : testutil::semicoherent_tables(n)) {
      const StructureFunction phi = testutil::from_bits(n, bits);
      for (const ModuleDecomposition& decomp : testutil::find_decompositions(phi)) {
        CHECK(subsignature_via_module(ex_n, decomp).values ==
              subsignature_direct(phi, ex_n, decomp.module_set).values);
        CHECK(subsignature_via_module(uniform, decomp).values ==
              subsignature_direct(phi, uniform, decomp.module_set).values);
      }
    }
  }
}

TEST_CASE("parallel modules satisfy the additive quality identity") {
  TestRng rng(13);
  for (int n = 4; n <= 6; ++n)
    for (int rep = 0; rep < 6; ++rep) {
      const OrderingDistribution dist = testutil::random_explicit(n, rng, n == 6 ? 120 : 0);
      // Random parallel module of size 2 or 3.
      const int m = 2 + static_cast<int>(rng.below(2));
      std::uint32_t m_mask = 0;
      while (std::popcount(m_mask) != m)
        m_mask = static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << n));
      const ComponentSet module_set(m_mask);
      // Organizing structure: module in series with the rest, all parallel.
      const StructureFunction psi = StructureFunction::parallel(n - m + 1);
      const StructureFunction chi = StructureFunction::parallel(m);
      const StructureFunction phi = compose_module(psi, chi, module_set);
      const ModuleDecomposition decomp = make_module_decomposition(phi, module_set, chi);
      REQUIRE(decomp.validated);
      const ReducedQualityFunction rq = reduced_quality(dist, decomp);
      for (std::uint32_t rest = 0; rest < (1u << n); ++rest) {
        if (rest & m_mask) continue;
        Rational sum = 0;
        for (int j : module_set.components())
          sum += dist.q_component(j, ComponentSet(rest));
        CHECK(sum == rq.value(ComponentSet(rest)));
      }
    }
}

TEST_CASE("singleton module quality reduces to the component quality") {
  TestRng rng(17);
  const int n = 4;
  const OrderingDistribution dist = testutil::random_explicit(n, rng);
  const StructureFunction phi = parse_structure("x1&(x2|(x3&x4))", 4);
  const ModuleDecomposition decomp =
      make_module_decomposition(phi, cs({2}), parse_structure("x1", 1));
  REQUIRE(decomp.validated);
  const ReducedQualityFunction rq = reduced_quality(dist, decomp);
  for (std::uint32_t rest = 0; rest < 16; ++rest) {
    if (rest & 0b0010u) continue;
    CHECK(rq.value(ComponentSet(rest)) == dist.q_component(2, ComponentSet(rest)));
  }
}

TEST_CASE("integral forms of the module quantities") {
  WorkedExample ex;
  CHECK(exchangeable_module_attribution(ex.decomp) == make_rational(1, 6));

  // psi = bare macro: the derivative is identically one.
  const ModuleDecomposition whole =
      make_module_decomposition(ex.phi, ComponentSet::full(4), ex.phi);
  CHECK(exchangeable_module_attribution(whole) == 1);

  // Series organizing structure on three reduced components.
  const StructureFunction series4 = StructureFunction::series(4);
  const ModuleDecomposition series_decomp =
      make_module_decomposition(series4, cs({3, 4}), StructureFunction::series(2));
  CHECK(exchangeable_module_attribution(series_decomp) == make_rational(1, 3));

  const StructuralSubsignature sub = exchangeable_module_subsignature(ex.decomp);
  CHECK(sub.values == rat({{1, 6}, {0, 1}}));
  CHECK(sub.values == structural_subsignature(ex.phi, cs({3, 4})).values);

  // Parallel module on the same organizing structure.
  const StructureFunction chi_par = StructureFunction::parallel(2);
  const StructureFunction phi_par = compose_module(ex.decomp.psi, chi_par, cs({3, 4}));
  const ModuleDecomposition decomp_par = make_module_decomposition(phi_par, cs({3, 4}), chi_par);
  REQUIRE(decomp_par.validated);
  const StructuralSubsignature sub_par = exchangeable_module_subsignature(decomp_par);
  CHECK(sub_par.values == rat({{0, 1}, {1, 6}}));
  CHECK(sub_par.values == structural_subsignature(phi_par, cs({3, 4})).values);
}

TEST_CASE("factor does not depend on the module structure") {
  WorkedExample ex;
  const StructureFunction chi_par = StructureFunction::parallel(2);
  const StructureFunction phi_par = compose_module(ex.decomp.psi, chi_par, cs({3, 4}));
  const ModuleDecomposition decomp_par = make_module_decomposition(phi_par, cs({3, 4}), chi_par);
  const OrderingDistribution exch = OrderingDistribution::exchangeable(4);
  const FactorizationReport a = factorization_check(exch, ex.decomp);
  const FactorizationReport b = factorization_check(exch, decomp_par);
  REQUIRE(a.holds);
  REQUIRE(b.holds);
  REQUIRE(a.factors.size() == b.factors.size());
  for (std::size_t k = 0; k < a.factors.size(); ++k) CHECK(*a.factors[k] == *b.factors[k]);
}
