#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subsig/signature.hpp"
#include "subsig/spec_io.hpp"

using namespace subsig;

TEST_CASE("formula spec with exchangeable lifetimes") {
  const SystemSpec spec = parse_system_spec(R"json({
    "spec_version": 1,
    "n": 3,
    "structure": {"formula": "(x1 | x2) & x3"},
    "lifetime": {"kind": "exchangeable"}
  })json");
  CHECK(spec.n == 3);
  CHECK(spec.lifetime_kind == "exchangeable");
  CHECK(spec.has_exact());
  CHECK_FALSE(spec.continuous.has_value());
  CHECK(spec.exact_distribution().symbolic_exchangeable());
  CHECK(spec.structure.value(ComponentSet::of({1, 3})));
}

TEST_CASE("path-set structures") {
  const SystemSpec spec = parse_system_spec(R"json({
    "spec_version": 1,
    "n": 3,
    "structure": {"path_sets": [[1, 3], [2, 3]]},
    "lifetime": {"kind": "exchangeable"}
  })json");
  CHECK(spec.structure.value(ComponentSet::of({1, 3})));
  CHECK_FALSE(spec.structure.value(ComponentSet::of({1, 2})));
}

TEST_CASE("explicit ordering lifetimes") {
  const SystemSpec spec = parse_system_spec(R"json({
    "spec_version": 1,
    "n": 2,
    "structure": {"formula": "x1 & x2"},
    "lifetime": {"kind": "orderings", "entries": [
      {"order": [1, 2], "p": "1/3"},
      {"order": [2, 1], "p": "2/3"}
    ]}
  })json");
  const OrderingDistribution dist = spec.exact_distribution();
  CHECK(dist.enumerable());
  CHECK(dist.q(ComponentSet::of({2})) == make_rational(1, 3));
}

TEST_CASE("exact exponential rates materialize on demand") {
  const SystemSpec spec = parse_system_spec(R"json({
    "spec_version": 1,
    "n": 2,
    "structure": {"formula": "x1 & x2"},
    "lifetime": {"kind": "exponential", "rates": ["1", "2"]}
  })json");
  CHECK(spec.has_exact());
  CHECK(spec.continuous.has_value());  // sampling model comes along
  const OrderingDistribution dist = spec.exact_distribution();
  CHECK(dist.q(ComponentSet::of({2})) == make_rational(1, 3));
  CHECK(barlow_proschan(spec.structure, dist).values ==
        std::vector<Rational>{make_rational(1, 3), make_rational(2, 3)});
}

TEST_CASE("sampling-only lifetime kinds") {
  const SystemSpec iid = parse_system_spec(R"json({
    "spec_version": 1,
    "n": 3,
    "structure": {"formula": "x1 & x2 & x3"},
    "lifetime": {"kind": "iid_exponential", "rate": 0.5}
  })json");
  CHECK(iid.continuous.has_value());
  CHECK(iid.exact_distribution().symbolic_exchangeable());  // induced uniform law

  const SystemSpec indep = parse_system_spec(R"json({
    "spec_version": 1,
    "n": 2,
    "structure": {"formula": "x1 & x2"},
    "lifetime": {"kind": "independent_exponential", "rates": [1.0, 2.5]}
  })json");
  CHECK_FALSE(indep.has_exact());
  CHECK_THROWS_AS(indep.exact_distribution(), CapabilityError);

  const SystemSpec gamma = parse_system_spec(R"json({
    "spec_version": 1,
    "n": 3,
    "structure": {"formula": "x1 | x2 | x3"},
    "lifetime": {"kind": "gamma_mixture", "shape": 2}
  })json");
  CHECK(gamma.continuous.has_value());
  CHECK(gamma.exact_distribution().symbolic_exchangeable());
}

TEST_CASE("declared modules parse against local indices") {
  const SystemSpec spec = parse_system_spec(R"json({
    "spec_version": 1,
    "n": 4,
    "structure": {"formula": "x1 & (x2 | (x3 & x4))"},
    "lifetime": {"kind": "exchangeable"},
    "modules": [{"set": [3, 4], "chi": "x1 & x2"}]
  })json");
  REQUIRE(spec.modules.size() == 1);
  const ModuleDecomposition decomp =
      make_module_decomposition(spec.structure, spec.modules[0].set, spec.modules[0].chi);
  CHECK(decomp.validated);
}

TEST_CASE("schema violations are rejected") {
  const char* cases[] = {
      // not JSON
      "{",
      // wrong version
      R"json({"spec_version": 2, "n": 2, "structure": {"formula": "x1&x2"},
          "lifetime": {"kind": "exchangeable"}})json",
      // missing n
      R"json({"spec_version": 1, "structure": {"formula": "x1"},
          "lifetime": {"kind": "exchangeable"}})json",
      // unknown top-level field
      R"json({"spec_version": 1, "n": 2, "structure": {"formula": "x1&x2"},
          "lifetime": {"kind": "exchangeable"}, "extra": 1})json",
      // unknown lifetime field
      R"json({"spec_version": 1, "n": 2, "structure": {"formula": "x1&x2"},
          "lifetime": {"kind": "exchangeable", "rate": 1}})json",
      // both structure sources
      R"json({"spec_version": 1, "n": 2,
          "structure": {"formula": "x1&x2", "path_sets": [[1]]},
          "lifetime": {"kind": "exchangeable"}})json",
      // decimal rational
      R"json({"spec_version": 1, "n": 2, "structure": {"formula": "x1&x2"},
          "lifetime": {"kind": "orderings", "entries": [
            {"order": [1,2], "p": "0.5"}, {"order": [2,1], "p": "0.5"}]}})json",
      // ordering mass does not reach one
      R"json({"spec_version": 1, "n": 2, "structure": {"formula": "x1&x2"},
          "lifetime": {"kind": "orderings", "entries": [
            {"order": [1,2], "p": "1/2"}]}})json",
      // duplicate ordering
      R"json({"spec_version": 1, "n": 2, "structure": {"formula": "x1&x2"},
          "lifetime": {"kind": "orderings", "entries": [
            {"order": [1,2], "p": "1/2"}, {"order": [1,2], "p": "1/2"}]}})json",
      // nonpositive exponential rate
      R"json({"spec_version": 1, "n": 2, "structure": {"formula": "x1&x2"},
          "lifetime": {"kind": "exponential", "rates": ["0", "1"]}})json",
      // module set out of range
      R"json({"spec_version": 1, "n": 2, "structure": {"formula": "x1&x2"},
          "lifetime": {"kind": "exchangeable"},
          "modules": [{"set": [1, 5], "chi": "x1&x2"}]})json",
      // empty path set
      R"json({"spec_version": 1, "n": 2, "structure": {"path_sets": [[]]},
          "lifetime": {"kind": "exchangeable"}})json",
  };
  for (const char* text : cases) CHECK_THROWS_AS(parse_system_spec(text), SpecError);

  CHECK_THROWS_AS(parse_system_spec(R"json({"spec_version": 1, "n": 25,
      "structure": {"formula": "x1"}, "lifetime": {"kind": "exchangeable"}})json"),
                  CapabilityError);
  CHECK_THROWS_AS(parse_system_spec(R"json({"spec_version": 1, "n": 2,
      "structure": {"formula": "x1 &"}, "lifetime": {"kind": "exchangeable"}})json"),
                  ParseError);

  CHECK_THROWS_AS(load_system_spec("/nonexistent/spec.json"), SpecError);
}
