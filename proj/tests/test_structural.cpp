#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subsig/formula.hpp"
#include "subsig/signature.hpp"
#include "subsig/structural.hpp"
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

}  // namespace

TEST_CASE("beta integral identity") {
  CHECK(beta_integral(0, 0) == 1);
  CHECK(beta_integral(2, 1) == make_rational(1, 12));
  CHECK(beta_integral(1, 1) == make_rational(1, 6));
  // Term-by-term expansion of t^p (1-t)^q integrates to the same value.
  for (unsigned p = 0; p <= 6; ++p)
    for (unsigned q = 0; q <= 6; ++q) {
      std::vector<Integer> ones{1};
      Polynomial poly(ones);
      Polynomial t(std::vector<Integer>{0, 1});
      Polynomial one_minus_t(std::vector<Integer>{1, -1});
      for (unsigned i = 0; i < p; ++i) poly = poly * t;
      for (unsigned i = 0; i < q; ++i) poly = poly * one_minus_t;
      CHECK(integrate_unit(poly) == beta_integral(p, q));
    }
}

TEST_CASE("polynomial integration with and without the beta weight") {
  const Polynomial poly(std::vector<Integer>{0, 1, -1});  // t - t^2
  CHECK(integrate_unit(poly) == make_rational(1, 6));
  // r_{1,2}(t) = 2t
  CHECK(integrate_beta_weighted(poly, 1, 2) == make_rational(1, 6));
  // r_{2,2}(t) = 2(1-t)
  CHECK(integrate_beta_weighted(poly, 2, 2) == make_rational(1, 6));
  const Polynomial constant(std::vector<Integer>{1});
  for (unsigned m = 1; m <= 5; ++m)
    for (unsigned k = 1; k <= m; ++k) CHECK(integrate_beta_weighted(constant, k, m) == 1);
  CHECK_THROWS_AS(integrate_beta_weighted(poly, 0, 2), DomainError);
  CHECK_THROWS_AS(integrate_beta_weighted(poly, 3, 2), DomainError);
}

TEST_CASE("structural subsignature of the worked examples") {
  const StructureFunction phi3 = parse_structure("(x1|x2)&x3", 3);
  CHECK(structural_subsignature(phi3, cs({1, 3})).values == rat({{2, 3}, {1, 6}}));

  const StructureFunction phi4 = parse_structure("x1&(x2|(x3&x4))", 4);
  CHECK(structural_subsignature(phi4, cs({3, 4})).values == rat({{1, 6}, {0, 1}}));

  // Series of four, M = {1,2}: the first overall failure kills the system
  // and lies in M with probability 1/2.
  CHECK(structural_subsignature(StructureFunction::series(4), cs({1, 2})).values ==
        rat({{1, 2}, {0, 1}}));
}

TEST_CASE("three closed forms agree exhaustively for n <= 4") {
  for (int n = 1; n <= 4; ++n)
    for (std::uint64_t bits : testutil::semicoherent_tables(n)) {
      const StructureFunction phi = testutil::from_bits(n, bits);
      for (std::uint32_t m_mask = 1; m_mask < (1u << n); ++m_mask) {
        const ComponentSet m(m_mask);
        const auto delta_form = structural_subsignature_delta(phi, m);
        CHECK(structural_subsignature_signed(phi, m).values == delta_form.values);
        CHECK(structural_subsignature_levels(phi, m).values == delta_form.values);
      }
    }
}

TEST_CASE("structural signature: Boland vs delta routes and classics") {
  CHECK(structural_signature(StructureFunction::k_out_of_n(2, 3)) ==
        rat({{0, 1}, {1, 1}, {0, 1}}));
  CHECK(structural_signature(parse_structure("(x1|x2)&x3", 3)) ==
        rat({{1, 3}, {2, 3}, {0, 1}}));
  CHECK(structural_signature(StructureFunction::parallel(5)).back() == 1);

  TestRng rng(13);
  for (int n = 2; n <= 7; ++n)
    for (int rep = 0; rep < 10; ++rep) {
      const std::vector<Rational> s =
          structural_signature(testutil::random_semicoherent(n, rng));
      Rational sum = 0;
      for (const Rational& v : s) sum += v;
      CHECK(sum == 1);
    }
}

TEST_CASE("structural Barlow-Proschan values and normalization") {
  CHECK(structural_bp(StructureFunction::series(3)) == rat({{1, 3}, {1, 3}, {1, 3}}));
  CHECK(structural_bp(parse_structure("(x1|x2)&x3", 3)) == rat({{1, 6}, {1, 6}, {2, 3}}));

  const std::vector<Rational> b4 = structural_bp(parse_structure("x1&(x2|(x3&x4))", 4));
  CHECK(b4[0] == make_rational(7, 12));
  CHECK(b4[2] == make_rational(1, 12));

  TestRng rng(17);
  for (int n = 2; n <= 7; ++n) {
    const std::vector<Rational> b = structural_bp(testutil::random_semicoherent(n, rng));
    Rational sum = 0;
    for (const Rational& v : b) sum += v;
    CHECK(sum == 1);
  }
}

TEST_CASE("domination forms of the structural quantities") {
  const StructureFunction phi3 = parse_structure("(x1|x2)&x3", 3);
  const DominationFunction d3 = DominationFunction::from_structure(phi3);
  CHECK(structural_subsignature_domination(d3, cs({1, 3})).values == rat({{2, 3}, {1, 6}}));
  CHECK(structural_bp_domination(d3)[2] == make_rational(2, 3));  // 1/2 + 1/2 - 1/3

  const StructureFunction phi4 = parse_structure("x1&(x2|(x3&x4))", 4);
  const DominationFunction d4 = DominationFunction::from_structure(phi4);
  CHECK(structural_subsignature_domination(d4, cs({3, 4})).values == rat({{1, 6}, {0, 1}}));
  CHECK(structural_bp_domination(d4)[0] == make_rational(7, 12));  // 1/2 + 1/3 - 1/4
  CHECK(structural_bp_domination(d4)[2] == make_rational(1, 12));  // 1/3 - 1/4

  const DominationFunction ds = DominationFunction::from_structure(StructureFunction::series(3));
  CHECK(structural_signature_domination(ds) == rat({{1, 1}, {0, 1}, {0, 1}}));

  const DominationFunction dp = DominationFunction::from_structure(StructureFunction::parallel(2));
  CHECK(structural_bp_domination(dp) == rat({{1, 2}, {1, 2}}));

  TestRng rng(19);
  for (int n = 2; n <= 6; ++n)
    for (int rep = 0; rep < 8; ++rep) {
      const StructureFunction phi = testutil::random_semicoherent(n, rng);
      const DominationFunction d = DominationFunction::from_structure(phi);
      CHECK(structural_signature_domination(d) == structural_signature(phi));
      CHECK(structural_bp_domination(d) == structural_bp(phi));
      const ComponentSet m(
          static_cast<std::uint32_t>(1 + rng.below((std::uint64_t{1} << n) - 1)));
      CHECK(structural_subsignature_domination(d, m).values ==
            structural_subsignature(phi, m).values);
    }
}

TEST_CASE("distribution-freeness: structural equals exchangeable engine, n <= 4") {
  for (int n = 1; n <= 4; ++n) {
    const OrderingDistribution ex = OrderingDistribution::exchangeable(n);
    for (std::uint64_t bits : testutil::semicoherent_tables(n)) {
      const StructureFunction phi = testutil::from_bits(n, bits);
      for (std::uint32_t m_mask = 1; m_mask < (1u << n); ++m_mask) {
        const ComponentSet m(m_mask);
        CHECK(structural_subsignature(phi, m).values ==
              subsignature_direct(phi, ex, m).values);
      }
    }
  }
}

TEST_CASE("domination form on indicator structures equals the order-statistic form") {
  // Corollary chain: evaluating the domination form on phi_A reproduces
  // Pr(T_{k:M} = min_{i in A} T_i).
  TestRng rng(29);
  const int n = 5;
  const OrderingDistribution ex = OrderingDistribution::exchangeable(n);
  for (int rep = 0; rep < 30; ++rep) {
    const ComponentSet a(
        static_cast<std::uint32_t>(1 + rng.below((std::uint64_t{1} << n) - 1)));
    const ComponentSet m(
        static_cast<std::uint32_t>(1 + rng.below((std::uint64_t{1} << n) - 1)));
    const DominationFunction d =
        DominationFunction::from_structure(StructureFunction::indicator(a, n));
    const StructuralSubsignature sub = structural_subsignature_domination(d, m);
    for (int k = 1; k <= m.count(); ++k)
      CHECK(sub.values[static_cast<std::size_t>(k - 1)] == ex.order_stat_min_prob(m, k, a));
  }
}
