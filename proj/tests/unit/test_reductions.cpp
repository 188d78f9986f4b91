#include <doctest.h>

#include <cmath>

#include "socs/compose.hpp"
#include "socs/oracle.hpp"
#include "socs/reductions.hpp"
#include "socs/rng.hpp"
#include "socs/structure.hpp"

using namespace socs;

TEST_CASE("rank-one matrix-product state") {
  MPS m;
  m.field = Field::Real;
  m.d = 2;
  m.v = 2;
  m.r = 1;
  m.tensors = {{Cplx(1, 0), Cplx(2, 0)}, {Cplx(3, 0), Cplx(4, 0)}};
  const Circuit c = mps_to_circuit(m);
  CHECK(evaluate(c, {0.0, 0.0}, EvalMode::Linear).real() == doctest::Approx(3.0));
  CHECK(evaluate(c, {1.0, 1.0}, EvalMode::Linear).real() == doctest::Approx(8.0));
  CHECK(structured_decomposable(c));
}

TEST_CASE("rank-one complex born machine factorizes") {
  Rng rng(3);
  MPS m;
  m.field = Field::Complex;
  m.d = 3;
  m.v = 2;
  m.r = 1;
  for (int j = 0; j < 3; ++j) {
    std::vector<Cplx> t(2);
    for (auto& e : t) e = Cplx(rng.normal(), rng.normal());
    m.tensors.push_back(std::move(t));
  }
  const Circuit bm = born_machine(m);
  for (std::uint64_t a = 0; a < 8; ++a) {
    Assignment x(3);
    double expect = 1.0;
    for (int t = 0; t < 3; ++t) {
      x[t] = double((a >> t) & 1);
      expect *= std::norm(m.tensors[t][std::size_t(x[t])]);
    }
    CHECK(evaluate(bm, x, EvalMode::Linear).real() == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("malformed tensors are rejected") {
  MPS m;
  m.field = Field::Real;
  m.d = 2;
  m.v = 2;
  m.r = 2;
  m.tensors = {{Cplx(1, 0)}, {Cplx(1, 0)}};  // too few entries
  CHECK_THROWS_AS(mps_to_circuit(m), ShapeError);
  m.d = 1;
  CHECK_THROWS_AS(mps_to_circuit(m), ShapeError);
}

TEST_CASE("hypercomplex decomposition") {
  SUBCASE("a real circuit is its own decomposition") {
    auto vars = boolean_variables(1);
    CircuitBuilder b(vars);
    const Circuit c = b.build(b.add_input(0, InputFunction(Indicator{1})));
    const auto parts = hypercomplex_decompose(c);
    CHECK(parts.size() == 1);
  }

  SUBCASE("the constant 1 + i splits into two ones") {
    auto vars = boolean_variables(1);
    CircuitBuilder b(vars, Field::Complex);
    const UnitId one = b.add_input(0, InputFunction(Indicator{1}));
    const UnitId zero = b.add_input(0, InputFunction(Indicator{0}));
    const Circuit c = b.build(b.add_sum(
        {one, zero}, {WeightExpr::lit(Cplx(1, 1)), WeightExpr::lit(Cplx(1, 1))}));
    const auto parts = hypercomplex_decompose(c);
    REQUIRE(parts.size() == 2);
    for (double x : {0.0, 1.0}) {
      CHECK(evaluate(parts[0], {x}, EvalMode::Linear).real() == doctest::Approx(1.0));
      CHECK(evaluate(parts[1], {x}, EvalMode::Linear).real() == doctest::Approx(1.0));
    }
    // modulus square = 2 everywhere
    const Circuit sq = socs_sum(parts);
    CHECK(evaluate(sq, {0.0}, EvalMode::Linear).real() == doctest::Approx(2.0));
  }

  SUBCASE("quaternion circuits decompose into four real circuits") {
    Rng rng(11);
    auto vars = boolean_variables(2);
    CircuitBuilder b(vars, Field::Hypercomplex, 2);
    auto rand_h = [&] {
      Hyper h(2);
      for (int i = 0; i < 4; ++i) h[i] = rng.normal();
      return h;
    };
    std::vector<UnitId> parts_units;
    for (int v = 0; v < 2; ++v) {
      const UnitId i0 = b.add_input(v, InputFunction(Indicator{0}));
      const UnitId i1 = b.add_input(v, InputFunction(Indicator{1}));
      parts_units.push_back(b.add_sum_hyper({i0, i1}, {rand_h(), rand_h()}, {0, 1}));
    }
    const UnitId prod = b.add_product({parts_units[0], parts_units[1]});
    const Circuit c = b.build(b.add_sum_hyper({prod}, {rand_h()}, {0}));

    const auto parts = hypercomplex_decompose(c);
    REQUIRE(parts.size() == 4);
    for (std::uint64_t a = 0; a < 4; ++a) {
      const Assignment x = assignment_from_index(*vars, a);
      const Hyper direct = evaluate_hyper(c, x);
      for (int i = 0; i < 4; ++i) {
        CHECK(evaluate(parts[i], x, EvalMode::Linear).real() ==
              doctest::Approx(direct[i]).epsilon(1e-10));
      }
      // modulus square equals the sum of the four squares
      double mod2 = 0.0;
      for (int i = 0; i < 4; ++i) mod2 += direct[i] * direct[i];
      const Circuit sq = square(c);
      CHECK(evaluate(sq, x, EvalMode::Linear).real() == doctest::Approx(mod2).epsilon(1e-10));
    }
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        CHECK(check_compatible(parts[i], parts[j]).compatible);
      }
    }
  }

  SUBCASE("octonion circuits decompose despite non-associativity") {
    Rng rng(17);
    auto vars = boolean_variables(2);
    CircuitBuilder b(vars, Field::Hypercomplex, 3);
    auto rand_h = [&] {
      Hyper h(3);
      for (int i = 0; i < 8; ++i) h[i] = rng.normal();
      return h;
    };
    std::vector<UnitId> sums;
    for (int v = 0; v < 2; ++v) {
      const UnitId i0 = b.add_input(v, InputFunction(Indicator{0}));
      const UnitId i1 = b.add_input(v, InputFunction(Indicator{1}));
      sums.push_back(b.add_sum_hyper({i0, i1}, {rand_h(), rand_h()},
                                     {std::uint8_t(v), std::uint8_t(1 - v)}));
    }
    const UnitId prod = b.add_product({sums[0], sums[1]});
    const Circuit c = b.build(b.add_sum_hyper({prod}, {rand_h()}, {1}));

    const auto parts = hypercomplex_decompose(c);
    REQUIRE(parts.size() == 8);
    for (std::uint64_t a = 0; a < 4; ++a) {
      const Assignment x = assignment_from_index(*vars, a);
      const Hyper direct = evaluate_hyper(c, x);
      for (int i = 0; i < 8; ++i) {
        CHECK(evaluate(parts[i], x, EvalMode::Linear).real() ==
              doctest::Approx(direct[i]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("PSD conversions") {
  auto vars = boolean_variables(1);
  auto leaf_mix = [&](double w0, double w1) {
    CircuitBuilder b(vars);
    const UnitId i0 = b.add_input(0, InputFunction(Indicator{0}));
    const UnitId i1 = b.add_input(0, InputFunction(Indicator{1}));
    return b.build(b.add_sum({i0, i1}, {WeightExpr::lit(w0), WeightExpr::lit(w1)}));
  };
  const Circuit c1 = leaf_mix(1.0, -1.0);
  const Circuit c2 = leaf_mix(0.5, 2.0);

  SUBCASE("diagonal matrices scale the squares") {
    PSDModel p;
    p.components = {c1, c2};
    p.matrix = {{4.0, 0.0}, {0.0, 9.0}};
    const Circuit s = psd_to_socs(p);
    for (double x : {0.0, 1.0}) {
      const double v1 = evaluate(c1, {x}, EvalMode::Linear).real();
      const double v2 = evaluate(c2, {x}, EvalMode::Linear).real();
      CHECK(evaluate(s, {x}, EvalMode::Linear).real() ==
            doctest::Approx(4 * v1 * v1 + 9 * v2 * v2).epsilon(1e-12));
    }
  }

  SUBCASE("negative eigenvalues are rejected") {
    PSDModel p;
    p.components = {c1, c2};
    p.matrix = {{1.0, 2.0}, {2.0, 1.0}};  // eigenvalues 3 and -1
    CHECK_THROWS_AS(psd_to_socs(p), NotPsdError);
  }

  SUBCASE("asymmetric matrices are rejected") {
    PSDModel p;
    p.components = {c1, c2};
    p.matrix = {{1.0, 0.5}, {0.2, 1.0}};
    CHECK_THROWS_AS(psd_to_socs(p), ShapeError);
  }

  SUBCASE("socs_to_psd requires provenance") {
    CHECK_THROWS_AS(socs_to_psd(c1), ConfigError);
  }
}

TEST_CASE("squared neural family edge cases") {
  SUBCASE("trivial exp network reduces to the base measure") {
    SnefySpec s;
    s.sigma = SnefySpec::Sigma::Exp;
    s.V = {{1.0}};
    s.W = {{0.0}};
    s.b = {0.0};
    SnefySpec::Var v;
    v.finite = false;
    v.mu_mean = 0.3;
    v.mu_stddev = 1.1;
    s.vars = {v};
    const Circuit c = snefy_to_socs(s);
    for (double x : {-1.0, 0.0, 2.0}) {
      const double z = (x - 0.3) / 1.1;
      const double mu = std::exp(-0.5 * z * z) / (1.1 * std::sqrt(2 * M_PI));
      CHECK(evaluate(c, {x}, EvalMode::Linear).real() == doctest::Approx(mu).epsilon(1e-9));
    }
  }

  SUBCASE("cos with zero weights squares the coefficient sum") {
    SnefySpec s;
    s.sigma = SnefySpec::Sigma::Cos;
    s.V = {{0.7, -0.2}};
    s.W = {{0.0}, {0.0}};
    s.b = {0.0, 0.0};
    SnefySpec::Var v;
    v.finite = false;
    v.mu_mean = 0.0;
    v.mu_stddev = 1.0;
    s.vars = {v};
    const Circuit c = snefy_to_socs(s);
    const double coeff = 0.5 * 0.5;  // (0.7 - 0.2)^2
    for (double x : {-0.5, 0.9}) {
      const double mu = std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI);
      const Cplx got = evaluate(c, {x}, EvalMode::Linear);
      CHECK(got.real() == doctest::Approx(mu * coeff).epsilon(1e-9));
      CHECK(std::abs(got.imag()) < 1e-12);
    }
  }

  SUBCASE("finite domains with explicit statistic tables") {
    Rng rng(21);
    SnefySpec s;
    s.sigma = SnefySpec::Sigma::Exp;
    s.V = {{0.5, -0.3}, {1.0, 0.2}};
    s.W = {{0.3, -0.2, 0.4}, {0.1, 0.6, -0.5}};
    s.b = {0.1, -0.4};
    SnefySpec::Var v0;
    v0.finite = true;
    v0.cardinality = 3;
    v0.mu_weights = {0.2, 0.5, 0.3};
    v0.t = {{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}};  // C_u = 2
    SnefySpec::Var v1;
    v1.finite = true;
    v1.cardinality = 2;
    v1.mu_weights = {0.6, 0.4};
    v1.t = {{0.0}, {1.0}};  // C_u = 1
    s.vars = {v0, v1};
    const Circuit c = snefy_to_socs(s);
    for (int a = 0; a < 3; ++a) {
      for (int b2 = 0; b2 < 2; ++b2) {
        const Assignment x{double(a), double(b2)};
        CHECK(evaluate(c, x, EvalMode::Linear).real() ==
              doctest::Approx(s.direct(x)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("unrolling to sums of squares") {
  auto vars = boolean_variables(1);

  SUBCASE("a two-indicator sum gives two squares") {
    CircuitBuilder b(vars);
    const UnitId i0 = b.add_input(0, InputFunction(Indicator{0}));
    const UnitId i1 = b.add_input(0, InputFunction(Indicator{1}));
    const Circuit c =
        b.build(b.add_sum({i0, i1}, {WeightExpr::lit(0.5), WeightExpr::lit(0.5)}));
    const Circuit sos = unroll_to_sos(c);
    CHECK(sos.socs_structure()->components.size() == 2);
    for (double x : {0.0, 1.0}) {
      CHECK(evaluate(sos, {x}, EvalMode::Linear).real() == doctest::Approx(0.5));
    }
  }

  SUBCASE("a deterministic chain gives one square") {
    auto vars2 = boolean_variables(2);
    CircuitBuilder b(vars2);
    const UnitId i0 = b.add_input(0, InputFunction(Indicator{1}));
    const UnitId i1 = b.add_input(1, InputFunction(Indicator{0}));
    const UnitId p = b.add_product({i0, i1});
    const Circuit c = b.build(b.add_sum({p}, {WeightExpr::lit(0.7)}));
    const Circuit sos = unroll_to_sos(c);
    CHECK(sos.socs_structure()->components.size() == 1);
    CHECK(evaluate(sos, {1.0, 0.0}, EvalMode::Linear).real() == doctest::Approx(0.7));
  }

  SUBCASE("the budget cap is enforced") {
    auto vars6 = boolean_variables(6);
    CircuitBuilder b(vars6);
    std::vector<UnitId> parts;
    for (int v = 0; v < 6; ++v) {
      const UnitId i0 = b.add_input(v, InputFunction(Indicator{0}));
      const UnitId i1 = b.add_input(v, InputFunction(Indicator{1}));
      parts.push_back(b.add_sum({i0, i1}, {WeightExpr::lit(0.5), WeightExpr::lit(0.5)}));
    }
    const Circuit c = b.build(b.add_product_canonical(parts));
    CHECK_THROWS_AS(unroll_to_sos(c, 63), BudgetExceededError);  // 2^6 induced sub-circuits
    CHECK(unroll_to_sos(c, 64).socs_structure()->components.size() == 64);
  }

  SUBCASE("non-monotone circuits are rejected") {
    CircuitBuilder b(vars);
    const UnitId i0 = b.add_input(0, InputFunction(Indicator{0}));
    const UnitId i1 = b.add_input(0, InputFunction(Indicator{1}));
    const Circuit c =
        b.build(b.add_sum({i0, i1}, {WeightExpr::lit(1.0), WeightExpr::lit(-1.0)}));
    CHECK_THROWS_AS(unroll_to_sos(c), MonotonicityError);
  }
}
