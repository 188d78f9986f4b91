#include <doctest.h>

#include <cmath>

#include "socs/compose.hpp"
#include "socs/oracle.hpp"
#include "socs/structure.hpp"

using namespace socs;

namespace {

Circuit plus_minus(const VariableTablePtr& vars, int var) {
  // 1[X=0] - 1[X=1]
  CircuitBuilder b(vars);
  const UnitId i0 = b.add_input(var, InputFunction(Indicator{0}));
  const UnitId i1 = b.add_input(var, InputFunction(Indicator{1}));
  return b.build(b.add_sum({i0, i1}, {WeightExpr::lit(1.0), WeightExpr::lit(-1.0)}));
}

Circuit single_leaf(const VariableTablePtr& vars, int var, Cplx w, Field field) {
  CircuitBuilder b(vars, field);
  const UnitId i1 = b.add_input(var, InputFunction(Indicator{1}));
  return b.build(b.add_sum({i1}, {WeightExpr::lit(w)}));
}

}  // namespace

TEST_CASE("multiply basics") {
  SUBCASE("disjoint single leaves combine into one product") {
    auto vars = boolean_variables(2);
    CircuitBuilder b1(vars), b2(vars);
    const Circuit c1 = b1.build(b1.add_input(0, InputFunction(Indicator{1})));
    const Circuit c2 = b2.build(b2.add_input(1, InputFunction(Indicator{0})));
    const Circuit p = multiply(c1, c2);
    CHECK(p.num_units() == 3);
    CHECK(evaluate(p, {1.0, 0.0}, EvalMode::Linear).real() == doctest::Approx(1.0));
    CHECK(evaluate(p, {1.0, 1.0}, EvalMode::Linear).real() == doctest::Approx(0.0));
  }

  SUBCASE("(1[X=0] - 1[X=1]) squared is constantly one") {
    auto vars = boolean_variables(1);
    const Circuit c = plus_minus(vars, 0);
    const Circuit sq = multiply(c, c);
    CHECK(evaluate(sq, {0.0}, EvalMode::Linear).real() == doctest::Approx(1.0));
    CHECK(evaluate(sq, {1.0}, EvalMode::Linear).real() == doctest::Approx(1.0));
  }

  SUBCASE("incompatible circuits are rejected with the scope pair") {
    auto vars = boolean_variables(3);
    auto factorized = [&](bool left_pair) {
      CircuitBuilder b(vars);
      const UnitId x0 = b.add_input(0, InputFunction(Indicator{1}));
      const UnitId x1 = b.add_input(1, InputFunction(Indicator{1}));
      const UnitId x2 = b.add_input(2, InputFunction(Indicator{1}));
      const UnitId inner = left_pair ? b.add_product({x0, x1}) : b.add_product({x1, x2});
      const UnitId outer =
          left_pair ? b.add_product({inner, x2}) : b.add_product({x0, inner});
      return b.build(outer);
    };
    CHECK_THROWS_AS(multiply(factorized(true), factorized(false)), IncompatibleError);
  }
}

TEST_CASE("conjugation") {
  auto vars = boolean_variables(1);

  SUBCASE("weights are conjugated") {
    const Circuit c = single_leaf(vars, 0, Cplx(1.0, 2.0), Field::Complex);
    const Circuit cc = conjugate(c);
    CHECK(evaluate(cc, {1.0}, EvalMode::Linear) == Cplx(1.0, -2.0));
  }

  SUBCASE("real circuits are unchanged") {
    const Circuit c = plus_minus(vars, 0);
    const Circuit cc = conjugate(c);
    CHECK(evaluate(cc, {0.0}, EvalMode::Linear).real() == doctest::Approx(1.0));
    CHECK(evaluate(cc, {1.0}, EvalMode::Linear).real() == doctest::Approx(-1.0));
  }
}

TEST_CASE("squares") {
  auto vars = boolean_variables(1);

  SUBCASE("real square") {
    const Circuit sq = square(plus_minus(vars, 0));
    CHECK(evaluate(sq, {0.0}, EvalMode::Linear).real() == doctest::Approx(1.0));
    CHECK(evaluate(sq, {1.0}, EvalMode::Linear).real() == doctest::Approx(1.0));
  }

  SUBCASE("complex square is the modulus square") {
    const Circuit c = single_leaf(vars, 0, Cplx(1.0, 1.0), Field::Complex);
    const Circuit sq = square(c);
    const Cplx v = evaluate(sq, {1.0}, EvalMode::Linear);
    CHECK(v.real() == doctest::Approx(2.0));
    CHECK(std::abs(v.imag()) < 1e-12);
  }
}

TEST_CASE("sums of squares") {
  auto vars = boolean_variables(1);

  SUBCASE("a single term reduces to the square") {
    const Circuit c = plus_minus(vars, 0);
    const Circuit s = socs_sum({c});
    const Circuit sq = square(c);
    for (double x : {0.0, 1.0}) {
      CHECK(evaluate(s, {x}, EvalMode::Linear).real() ==
            doctest::Approx(evaluate(sq, {x}, EvalMode::Linear).real()));
    }
    CHECK(s.socs_structure() != nullptr);
    CHECK(s.socs_structure()->components.size() == 1);
  }

  SUBCASE("complex square of a + bi equals the sum of both real squares") {
    // a = 1[X=0] + 2 1[X=1], b = 3 1[X=0] - 1 1[X=1]; c = a + b i
    CircuitBuilder ba(vars);
    const Circuit a = [&] {
      const UnitId i0 = ba.add_input(0, InputFunction(Indicator{0}));
      const UnitId i1 = ba.add_input(0, InputFunction(Indicator{1}));
      return ba.build(ba.add_sum({i0, i1}, {WeightExpr::lit(1.0), WeightExpr::lit(2.0)}));
    }();
    CircuitBuilder bb(vars);
    const Circuit b = [&] {
      const UnitId i0 = bb.add_input(0, InputFunction(Indicator{0}));
      const UnitId i1 = bb.add_input(0, InputFunction(Indicator{1}));
      return bb.build(bb.add_sum({i0, i1}, {WeightExpr::lit(3.0), WeightExpr::lit(-1.0)}));
    }();
    CircuitBuilder bc(vars, Field::Complex);
    const Circuit c = [&] {
      const UnitId i0 = bc.add_input(0, InputFunction(Indicator{0}));
      const UnitId i1 = bc.add_input(0, InputFunction(Indicator{1}));
      return bc.build(bc.add_sum(
          {i0, i1}, {WeightExpr::lit(Cplx(1.0, 3.0)), WeightExpr::lit(Cplx(2.0, -1.0))}));
    }();
    const Circuit lhs = square(c);
    const Circuit rhs = socs_sum({a, b});
    for (double x : {0.0, 1.0}) {
      CHECK(evaluate(lhs, {x}, EvalMode::Linear).real() ==
            doctest::Approx(evaluate(rhs, {x}, EvalMode::Linear).real()).epsilon(1e-12));
    }
  }

  SUBCASE("negative coefficients are rejected") {
    CHECK_THROWS_AS(socs_sum({plus_minus(vars, 0)}, {-1.0}), ConfigError);
  }
}

TEST_CASE("monotone times squares") {
  auto vars = boolean_variables(2);

  auto monotone = [&] {
    CircuitBuilder b(vars);
    std::vector<UnitId> parts;
    for (int v = 0; v < 2; ++v) {
      const UnitId i0 = b.add_input(v, InputFunction(Indicator{0}));
      const UnitId i1 = b.add_input(v, InputFunction(Indicator{1}));
      parts.push_back(b.add_sum({i0, i1}, {WeightExpr::lit(0.4), WeightExpr::lit(0.6)}));
    }
    return b.build(b.add_product_canonical(parts));
  }();
  auto signed_circuit = [&] {
    CircuitBuilder b(vars);
    std::vector<UnitId> parts;
    for (int v = 0; v < 2; ++v) {
      const UnitId i0 = b.add_input(v, InputFunction(Indicator{0}));
      const UnitId i1 = b.add_input(v, InputFunction(Indicator{1}));
      parts.push_back(b.add_sum({i0, i1}, {WeightExpr::lit(1.0), WeightExpr::lit(v ? -2.0 : 0.5)}));
    }
    return b.build(b.add_product_canonical(parts));
  }();
  const Circuit socs = socs_sum({signed_circuit});

  SUBCASE("multiplying by a constant-one factor is the identity") {
    const Circuit one = constant_one(vars, Scope::full(2));
    const Circuit m1 = monotone_times_socs(one, socs);
    const Circuit m2 = monotone_times_socs(monotone, socs_sum({constant_one(vars, Scope::full(2))}));
    for (std::uint64_t a = 0; a < 4; ++a) {
      const Assignment x = assignment_from_index(*vars, a);
      CHECK(evaluate(m1, x, EvalMode::Linear).real() ==
            doctest::Approx(evaluate(socs, x, EvalMode::Linear).real()).epsilon(1e-12));
      CHECK(evaluate(m2, x, EvalMode::Linear).real() ==
            doctest::Approx(evaluate(monotone, x, EvalMode::Linear).real()).epsilon(1e-12));
    }
  }

  SUBCASE("split-log evaluation matches the materialized product") {
    const Circuit m = monotone_times_socs(monotone, socs);
    for (std::uint64_t a = 0; a < 4; ++a) {
      const Assignment x = assignment_from_index(*vars, a);
      const double direct = std::log(evaluate(m, x, EvalMode::Linear).real());
      const LogComplex split = split_log_value(m, x);
      CHECK(split.log_mag == doctest::Approx(direct).epsilon(1e-9));
    }
  }

  SUBCASE("non-monotone left factors are rejected") {
    CHECK_THROWS_AS(monotone_times_socs(signed_circuit, socs), MonotonicityError);
  }
}

TEST_CASE("conditioning") {
  auto vars = boolean_variables(2);
  CircuitBuilder b(vars);
  std::vector<UnitId> parts;
  for (int v = 0; v < 2; ++v) {
    const UnitId i0 = b.add_input(v, InputFunction(Indicator{0}));
    const UnitId i1 = b.add_input(v, InputFunction(Indicator{1}));
    parts.push_back(b.add_sum({i0, i1}, {WeightExpr::lit(1.0), WeightExpr::lit(v ? -1.0 : 2.0)}));
  }
  const Circuit c = b.build(b.add_product_canonical(parts));

  SUBCASE("conditioning on nothing is the identity") {
    const Circuit same = condition(c, Scope(2), {0.0, 0.0});
    for (std::uint64_t a = 0; a < 4; ++a) {
      const Assignment x = assignment_from_index(*vars, a);
      CHECK(evaluate(same, x, EvalMode::Linear).real() ==
            doctest::Approx(evaluate(c, x, EvalMode::Linear).real()));
    }
  }

  SUBCASE("conditioned variables become constants") {
    Scope assigned(2);
    assigned.add(1);
    const Circuit cc = condition(c, assigned, {0.0, 1.0});
    CHECK(cc.num_edges() <= c.num_edges());
    for (double x0 : {0.0, 1.0}) {
      CHECK(evaluate(cc, {x0, 0.0}, EvalMode::Linear).real() ==
            doctest::Approx(evaluate(c, {x0, 1.0}, EvalMode::Linear).real()));
    }
    // conditioned scope no longer contains the assigned variable
    CHECK(!cc.scope().contains(1));
    // Z of the conditioned circuit integrates the remaining variable only
    double expect = 0.0;
    for (double x0 : {0.0, 1.0}) expect += evaluate(c, {x0, 1.0}, EvalMode::Linear).real();
    CHECK(partition_function(cc).real() == doctest::Approx(expect));
  }

  SUBCASE("conditioning commutes with squaring") {
    Scope assigned(2);
    assigned.add(0);
    const Assignment e{1.0, 0.0};
    const Circuit lhs = condition(square(c), assigned, e);
    const Circuit rhs = square(condition(c, assigned, e));
    for (double x1 : {0.0, 1.0}) {
      CHECK(evaluate(lhs, {0.0, x1}, EvalMode::Linear).real() ==
            doctest::Approx(evaluate(rhs, {0.0, x1}, EvalMode::Linear).real()).epsilon(1e-12));
    }
  }

  SUBCASE("out-of-domain evidence is rejected") {
    Scope assigned(2);
    assigned.add(0);
    CHECK_THROWS_AS(condition(c, assigned, {3.0, 0.0}), DomainError);
  }
}

TEST_CASE("conditioning preserves sum-of-squares provenance") {
  auto vars = boolean_variables(2);
  auto mix = [&](double w0, double w1, int var) {
    CircuitBuilder b(vars);
    const UnitId i0 = b.add_input(var, InputFunction(Indicator{0}));
    const UnitId i1 = b.add_input(var, InputFunction(Indicator{1}));
    const UnitId s = b.add_sum({i0, i1}, {WeightExpr::lit(w0), WeightExpr::lit(w1)});
    std::vector<UnitId> parts{s};
    const int other = 1 - var;
    const UnitId o0 = b.add_input(other, InputFunction(Indicator{0}));
    const UnitId o1 = b.add_input(other, InputFunction(Indicator{1}));
    parts.push_back(b.add_sum({o0, o1}, {WeightExpr::lit(1.0), WeightExpr::lit(1.0)}));
    return b.build(b.add_product_canonical(parts));
  };
  const Circuit s = socs_sum({mix(1.0, -2.0, 0), mix(0.5, 1.5, 0)}, {1.0, 2.0});
  Scope assigned(2);
  assigned.add(1);
  const Circuit cond = condition(s, assigned, {0.0, 1.0});
  REQUIRE(cond.socs_structure() != nullptr);
  CHECK(cond.socs_structure()->components.size() == 2);
  CHECK(cond.socs_structure()->coefficients == std::vector<double>{1.0, 2.0});
  // conditioned provenance recomposes to the conditioned function
  const Circuit recomposed = socs_sum(cond.socs_structure()->components,
                                      cond.socs_structure()->coefficients);
  for (double x0 : {0.0, 1.0}) {
    CHECK(evaluate(recomposed, {x0, 0.0}, EvalMode::Linear).real() ==
          doctest::Approx(evaluate(cond, {x0, 0.0}, EvalMode::Linear).real()).epsilon(1e-12));
  }
}

TEST_CASE("hypercomplex circuits reject linear evaluation and conjugation") {
  auto vars = boolean_variables(1);
  CircuitBuilder b(vars, Field::Hypercomplex, 2);
  const UnitId i1 = b.add_input(0, InputFunction(Indicator{1}));
  const Circuit c = b.build(b.add_sum_hyper({i1}, {Hyper::real(1.0, 2)}, {0}));
  CHECK_THROWS_AS(evaluate(c, {1.0}, EvalMode::Linear), FieldError);
  CHECK_THROWS_AS(conjugate(c), FieldError);
  CHECK_THROWS_AS(multiply(c, c), FieldError);
  // squaring goes through the real decomposition and works
  const Circuit sq = square(c);
  CHECK(evaluate(sq, {1.0}, EvalMode::Linear).real() == doctest::Approx(1.0));
}
