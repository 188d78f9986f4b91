#include <doctest.h>

#include <cmath>

#include "socs/eval.hpp"
#include "socs/oracle.hpp"
#include "socs/structure.hpp"

using namespace socs;

namespace {

Circuit indicator_mix(const VariableTablePtr& vars, Cplx w0, Cplx w1, Field field = Field::Real) {
  CircuitBuilder b(vars, field);
  const UnitId i0 = b.add_input(0, InputFunction(Indicator{0}));
  const UnitId i1 = b.add_input(0, InputFunction(Indicator{1}));
  return b.build(b.add_sum({i0, i1}, {WeightExpr::lit(w0), WeightExpr::lit(w1)}));
}

}  // namespace

TEST_CASE("forward evaluation semantics") {
  auto vars = boolean_variables(1);

  SUBCASE("weighted indicator mixture") {
    const Circuit c = indicator_mix(vars, Cplx(0.3, 0), Cplx(0.7, 0));
    CHECK(evaluate(c, {1.0}, EvalMode::Linear).real() == doctest::Approx(0.7));
    CHECK(evaluate(c, {0.0}, EvalMode::LogComplex).real() == doctest::Approx(0.3));
    CHECK(evaluate(c, {0.0}, EvalMode::LogSign).real() == doctest::Approx(0.3));
  }

  SUBCASE("negative weights pass through") {
    const Circuit c = indicator_mix(vars, Cplx(-1.0, 0), Cplx(1.0, 0));
    for (const EvalMode mode : {EvalMode::Linear, EvalMode::LogSign, EvalMode::LogComplex}) {
      CHECK(evaluate(c, {0.0}, mode).real() == doctest::Approx(-1.0));
    }
  }

  SUBCASE("complex value in log-complex form") {
    const Circuit c = indicator_mix(vars, Cplx(0, 0), Cplx(1.0, 1.0), Field::Complex);
    const LogComplex l = evaluate_log(c, {1.0});
    CHECK(l.log_mag == doctest::Approx(std::log(std::sqrt(2.0))));
    CHECK(l.arg == doctest::Approx(M_PI / 4.0));
  }

  SUBCASE("log-sign mode rejects complex circuits") {
    const Circuit c = indicator_mix(vars, Cplx(0, 0), Cplx(1.0, 1.0), Field::Complex);
    CHECK_THROWS_AS(evaluate(c, {1.0}, EvalMode::LogSign), FieldError);
  }

  SUBCASE("out-of-domain assignments are rejected") {
    const Circuit c = indicator_mix(vars, Cplx(0.3, 0), Cplx(0.7, 0));
    CHECK_THROWS_AS(evaluate(c, {2.0}, EvalMode::Linear), DomainError);
    CHECK_THROWS_AS(evaluate(c, {0.5}, EvalMode::Linear), DomainError);
  }
}

TEST_CASE("partition functions and marginals") {
  auto vars = boolean_variables(1);

  SUBCASE("two unit indicators integrate to 2") {
    const Circuit c = indicator_mix(vars, Cplx(1, 0), Cplx(1, 0));
    CHECK(partition_function(c).real() == doctest::Approx(2.0));
  }

  SUBCASE("squared two-valued difference has Z = 2") {
    // c(X) = 1[X=0] - 1[X=1]; brute force over {0, 1}: 1 + 1 = 2
    const Circuit c = indicator_mix(vars, Cplx(1, 0), Cplx(-1, 0));
    double brute = 0.0;
    for (double x : {0.0, 1.0}) {
      const double v = evaluate(c, {x}, EvalMode::Linear).real();
      brute += v * v;
    }
    CHECK(brute == doctest::Approx(2.0));
  }

  SUBCASE("non-smooth circuits cannot be marginalized") {
    auto vars2 = boolean_variables(2);
    CircuitBuilder b(vars2);
    const UnitId a = b.add_input(0, InputFunction(Indicator{1}));
    const UnitId c1 = b.add_input(1, InputFunction(Indicator{1}));
    const Circuit bad = b.build(b.add_sum({a, c1}, {WeightExpr::lit(1.0), WeightExpr::lit(1.0)}));
    CHECK_THROWS_AS(partition_function(bad), StructureError);
  }

  SUBCASE("partial marginal equals explicit summation") {
    auto vars2 = boolean_variables(3);
    CircuitBuilder b(vars2);
    std::vector<UnitId> per_var;
    for (int v = 0; v < 3; ++v) {
      const UnitId i0 = b.add_input(v, InputFunction(Indicator{0}));
      const UnitId i1 = b.add_input(v, InputFunction(Indicator{1}));
      per_var.push_back(
          b.add_sum({i0, i1}, {WeightExpr::lit(0.25 + 0.1 * v), WeightExpr::lit(0.75)}));
    }
    const Circuit c = b.build(b.add_product_canonical(per_var));
    Scope keep(3);
    keep.add(1);
    Assignment x{0.0, 1.0, 0.0};
    double expect = 0.0;
    for (double a : {0.0, 1.0}) {
      for (double b2 : {0.0, 1.0}) {
        expect += evaluate(c, {a, 1.0, b2}, EvalMode::Linear).real();
      }
    }
    CHECK(marginalize(c, keep, x).real() == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("evaluate_hyper multiplies quaternions correctly") {
  // i * j = k and j * i = -k distinguish the weight sides
  const Hyper i({0, 1, 0, 0}), j({0, 0, 1, 0}), k({0, 0, 0, 1});
  CHECK((i * j - k).is_zero());
  CHECK((j * i + k).is_zero());
  CHECK((i * i + Hyper::real(1.0, 2)).is_zero());
  // conjugation flips all non-real basis coefficients
  const Hyper q({1, 2, 3, 4});
  const Hyper qc = q.conj();
  CHECK(qc[0] == 1.0);
  CHECK(qc[1] == -2.0);
  // |q|^2 = q^dagger q is real
  const Hyper sq = qc * q;
  CHECK(sq[0] == doctest::Approx(30.0));
  for (std::size_t t = 1; t < 4; ++t) CHECK(sq[t] == doctest::Approx(0.0));
}
