#include <doctest.h>

#include "socs/circuit.hpp"
#include "socs/eval.hpp"
#include "socs/rng.hpp"

using namespace socs;

TEST_CASE("scope set operations") {
  Scope a(130), b(130);
  a.add(0);
  a.add(64);
  a.add(129);
  b.add(64);
  CHECK(a.count() == 3);
  CHECK(!a.disjoint(b));
  CHECK(b.subset_of(a));
  CHECK(a.union_with(b).count() == 3);
  CHECK(a.minus(b).count() == 2);
  CHECK(a.min_index() == 0);
  CHECK(Scope(130).min_index() > 1000000);
  CHECK(Scope(130).empty());
}

TEST_CASE("builder binarizes product fan-in and preserves the function") {
  Rng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const int k = 3 + int(rng.uniform_int(10));  // up to 12 factors
    auto vars = boolean_variables(k);
    CircuitBuilder b(vars);
    std::vector<UnitId> leaves;
    std::vector<double> entries;
    for (int v = 0; v < k; ++v) {
      Embedding e;
      const double e0 = rng.normal(), e1 = rng.normal();
      e.re = {ParamField::fixed(e0), ParamField::fixed(e1)};
      leaves.push_back(b.add_input(v, InputFunction(e)));
      entries.push_back(e0);
      entries.push_back(e1);
    }
    const Circuit c = b.build(b.add_product(leaves));
    for (const Unit& u : c.units()) {
      if (u.kind == UnitKind::Product) CHECK(u.fan_in() == 2);
    }
    // exhaustive against the direct n-ary product for small k, sampled above
    const bool exhaustive = k <= 8;
    const std::uint64_t probes = exhaustive ? (1ull << k) : 64;
    for (std::uint64_t probe = 0; probe < probes; ++probe) {
      const std::uint64_t bits = exhaustive ? probe : rng.next_u64();
      Assignment x(k);
      double expect = 1.0;
      for (int v = 0; v < k; ++v) {
        x[v] = double((bits >> v) & 1);
        expect *= entries[2 * v + int(x[v])];
      }
      const double got = evaluate(c, x, EvalMode::Linear).real();
      CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("single-input products collapse to the input") {
  auto vars = boolean_variables(1);
  CircuitBuilder b(vars);
  const UnitId leaf = b.add_input(0, InputFunction(Indicator{1}));
  CHECK(b.add_product({leaf}) == leaf);
}

TEST_CASE("build prunes unreachable units and keeps scopes consistent") {
  auto vars = boolean_variables(2);
  CircuitBuilder b(vars);
  const UnitId l0 = b.add_input(0, InputFunction(Indicator{1}));
  const UnitId l1 = b.add_input(1, InputFunction(Indicator{0}));
  b.add_sum({l0, l1}, {WeightExpr::lit(1.0), WeightExpr::lit(1.0)});  // unreachable
  const UnitId p = b.add_product({l0, l1});
  const Circuit c = b.build(p);
  CHECK(c.num_units() == 3);
  CHECK(c.num_edges() == 2);
  CHECK(c.scopes_consistent());
  CHECK(c.scope().count() == 2);
}

TEST_CASE("weight expressions evaluate and differentiate") {
  const double theta[3] = {0.4, -0.3, 0.7};
  const WeightExpr w = WeightExpr::mul(WeightExpr::conj(WeightExpr::complex_slots(0, 1, Cplx())),
                                       WeightExpr::complex_slots(1, 2, Cplx()));
  // conj(t0 + i t1) * (t1 + i t2)
  const Cplx expect = std::conj(Cplx(0.4, -0.3)) * Cplx(-0.3, 0.7);
  CHECK(std::abs(w.value(theta) - expect) < 1e-15);
  CHECK(w.has_slots());

  // finite-difference check of backprop through the expression
  auto loss = [&](const double* t) {
    const Cplx v = w.value(t);
    return 0.3 * v.real() - 0.8 * v.imag();
  };
  double grad[3] = {0, 0, 0};
  w.backprop(Cplx(0.3, -0.8), theta, grad);
  for (int i = 0; i < 3; ++i) {
    double tp[3] = {theta[0], theta[1], theta[2]};
    tp[i] += 1e-6;
    double tm[3] = {theta[0], theta[1], theta[2]};
    tm[i] -= 1e-6;
    const double fd = (loss(tp) - loss(tm)) / 2e-6;
    CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6));
  }
}
