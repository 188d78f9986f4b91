#include <doctest.h>

#include "socs/structure.hpp"

using namespace socs;

namespace {

Circuit two_indicator_sum(const VariableTablePtr& vars, int var, double w0 = 0.3,
                          double w1 = 0.7) {
  CircuitBuilder b(vars);
  const UnitId i0 = b.add_input(var, InputFunction(Indicator{0}));
  const UnitId i1 = b.add_input(var, InputFunction(Indicator{1}));
  return b.build(b.add_sum({i0, i1}, {WeightExpr::lit(w0), WeightExpr::lit(w1)}));
}

}  // namespace

TEST_CASE("smoothness and decomposability reports") {
  auto vars = boolean_variables(2);

  SUBCASE("sum over indicators of one variable is smooth and decomposable") {
    const Circuit c = two_indicator_sum(vars, 0);
    const auto r = check_smooth_decomposable(c);
    CHECK(r.smooth);
    CHECK(r.decomposable);
    CHECK(r.smoothness_witnesses.empty());
  }

  SUBCASE("sum over different scopes is not smooth") {
    CircuitBuilder b(vars);
    const UnitId a = b.add_input(0, InputFunction(Indicator{1}));
    const UnitId bb = b.add_input(1, InputFunction(Indicator{1}));
    const UnitId s = b.add_sum({a, bb}, {WeightExpr::lit(1.0), WeightExpr::lit(1.0)});
    const Circuit c = b.build(s);
    const auto r = check_smooth_decomposable(c);
    CHECK(!r.smooth);
    CHECK(r.decomposable);
    REQUIRE(r.smoothness_witnesses.size() == 1);
    CHECK(c.unit(r.smoothness_witnesses[0]).kind == UnitKind::Sum);
  }

  SUBCASE("product with overlapping child scopes is not decomposable") {
    CircuitBuilder b(vars);
    const UnitId a = b.add_input(0, InputFunction(Indicator{1}));
    const UnitId c1 = b.add_input(1, InputFunction(Indicator{1}));
    const UnitId p01 = b.add_product({a, c1});                 // scope {X1, X2}
    const UnitId c2 = b.add_input(1, InputFunction(Indicator{0}));  // scope {X2}
    const UnitId root = b.add_product({p01, c2});
    const Circuit c = b.build(root);
    const auto r = check_smooth_decomposable(c);
    CHECK(!r.decomposable);
    CHECK(r.decomposability_witnesses.size() == 1);
  }
}

TEST_CASE("compatibility") {
  auto vars = boolean_variables(3);

  auto factorized = [&](const std::vector<std::vector<int>>& grouping) {
    // product of indicator groups; grouping fixes the split structure
    CircuitBuilder b(vars);
    std::vector<UnitId> parts;
    for (const auto& group : grouping) {
      std::vector<UnitId> leaves;
      for (int v : group) leaves.push_back(b.add_input(v, InputFunction(Indicator{1})));
      parts.push_back(b.add_product(leaves));
    }
    return b.build(b.add_product(parts));
  };

  SUBCASE("identical split structures are compatible") {
    const Circuit a = factorized({{0}, {1, 2}});
    const Circuit b2 = factorized({{0}, {1, 2}});
    CHECK(check_compatible(a, b2).compatible);
    CHECK(structured_decomposable(a));
  }

  SUBCASE("different splits of the same scope are incompatible") {
    const Circuit a = factorized({{0}, {1, 2}});
    const Circuit b2 = factorized({{0, 1}, {2}});
    const auto r = check_compatible(a, b2);
    CHECK(!r.compatible);
    CHECK(!r.witnesses.empty());
  }

  SUBCASE("gaussian leaves on one variable are compatible") {
    auto rvars = std::make_shared<VariableTable>(
        std::vector<Variable>{{"X1", Domain::real_line()}});
    auto make = [&](double mu) {
      CircuitBuilder b(rvars);
      Gaussian g;
      g.mean = ParamField::fixed(mu);
      g.log_stddev = ParamField::fixed(0.0);
      return b.build(b.add_input(0, InputFunction(g)));
    };
    CHECK(check_compatible(make(0.0), make(1.0)).compatible);
  }

  SUBCASE("unsmooth inputs are rejected") {
    CircuitBuilder b(vars);
    const UnitId a = b.add_input(0, InputFunction(Indicator{1}));
    const UnitId c1 = b.add_input(1, InputFunction(Indicator{1}));
    const Circuit bad = b.build(b.add_sum({a, c1}, {WeightExpr::lit(1.0), WeightExpr::lit(1.0)}));
    const Circuit good = factorized({{0}, {1, 2}});
    CHECK_THROWS_AS(check_compatible(bad, good), StructureError);
  }
}

TEST_CASE("monotonicity") {
  auto vars = boolean_variables(1);

  SUBCASE("positive weights over indicators") {
    const Circuit c = two_indicator_sum(vars, 0, 0.5, 0.5);
    CHECK(check_monotone(c));
    CHECK(c.monotone_cache() == 1);  // cached after the first call
  }

  SUBCASE("one negative weight") {
    const Circuit c = two_indicator_sum(vars, 0, -1.0, 1.0);
    CHECK(!check_monotone(c));
    CHECK(c.monotone_cache() == 0);
  }

  SUBCASE("embedding signs decide") {
    auto make = [&](double e1) {
      CircuitBuilder b(vars);
      Embedding e;
      e.re = {ParamField::fixed(0.2), ParamField::fixed(e1)};
      return b.build(b.add_input(0, InputFunction(e)));
    };
    CHECK(check_monotone(make(0.8)));
    CHECK(!check_monotone(make(-0.8)));
  }

  SUBCASE("complex circuits are rejected") {
    CircuitBuilder b(vars, Field::Complex);
    const UnitId i = b.add_input(0, InputFunction(Indicator{1}));
    const Circuit c = b.build(b.add_sum({i}, {WeightExpr::lit(Cplx(1.0, 1.0))}));
    CHECK_THROWS_AS(check_monotone(c), FieldError);
  }
}
