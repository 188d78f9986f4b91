#include "socs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>

#include "socs/compose.hpp"
#include "socs/constructions.hpp"
#include "socs/errors.hpp"
#include "socs/oracle.hpp"
#include "socs/rng.hpp"
#include "socs/serialize.hpp"
#include "socs/structure.hpp"
#include "socs/tensorized.hpp"
#include "socs/training.hpp"

namespace socs {

namespace {

bool close(double a, double b, double rtol, double atol = 0.0) {
  return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
}

bool close(Cplx a, Cplx b, double rtol, double atol = 0.0) {
  return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
}

struct Ctx {
  const VerifyOptions& opts;
  std::vector<CheckResult> results;
  bool corrupt_pending;

  explicit Ctx(const VerifyOptions& o) : opts(o), corrupt_pending(o.corrupt) {}

  void run(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    try {
      std::string detail = body();
      if (corrupt_pending) {
        corrupt_pending = false;
        detail = "deliberately corrupted by the test hook";
        r.passed = false;
        r.detail = detail;
        write_replay(name, "{\"corrupted\": true}\n");
        results.push_back(std::move(r));
        return;
      }
      r.passed = true;
      r.detail = std::move(detail);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }

  void write_replay(const std::string& check, const std::string& payload) {
    std::string fname = opts.replay_dir + "/replay_" + check + ".json";
    for (auto& ch : fname) {
      if (ch == ' ') ch = '_';
    }
    try {
      write_text_file(fname, payload);
    } catch (const std::exception&) {
      // replay files are best effort
    }
  }

  /// Fails the current check: serializes the case and throws.
  [[noreturn]] void fail(const std::string& check, const std::string& msg,
                         const std::string& payload) {
    write_replay(check, payload);
    throw Error(msg);
  }
};

Model random_model(Rng& rng, int num_vars, ModelClass cls, int max_k = 2) {
  LayerSpec spec;
  spec.model_class = cls;
  spec.sum_units = 1 + int(rng.uniform_int(max_k));
  spec.input_units = 1 + int(rng.uniform_int(max_k));
  spec.num_squares = cls == ModelClass::Socs ? 2 + int(rng.uniform_int(2)) : 1;
  spec.seed = rng.next_u64();
  switch (cls) {
    case ModelClass::Monotone:
      spec.input_family = InputFamily::Categorical;
      break;
    case ModelClass::SquaredReal:
      spec.input_family = InputFamily::EmbeddingReal;
      break;
    default:
      spec.input_family = InputFamily::EmbeddingComplex;
      break;
  }
  auto rg = std::make_shared<RegionGraph>(RegionGraph::random_binary_tree(num_vars, rng.next_u64()));
  return build(rg, boolean_variables(num_vars), spec);
}

/// Two compatible random circuits on one region graph.
std::pair<Circuit, Circuit> random_compatible_pair(Rng& rng, int num_vars) {
  auto rg = std::make_shared<RegionGraph>(RegionGraph::random_binary_tree(num_vars, rng.next_u64()));
  auto vars = boolean_variables(num_vars);
  auto make = [&](ModelClass cls) {
    LayerSpec spec;
    spec.model_class = cls;
    spec.sum_units = 1 + int(rng.uniform_int(2));
    spec.input_units = 1 + int(rng.uniform_int(2));
    spec.seed = rng.next_u64();
    spec.input_family = cls == ModelClass::Monotone ? InputFamily::Categorical
                        : cls == ModelClass::SquaredReal ? InputFamily::EmbeddingReal
                                                         : InputFamily::EmbeddingComplex;
    return build(rg, vars, spec).components[0];
  };
  const ModelClass kinds[] = {ModelClass::Monotone, ModelClass::SquaredReal};
  return {make(kinds[rng.uniform_int(2)]), make(kinds[rng.uniform_int(2)])};
}

// ---------------------------------------------------------------- structural

void suite_structural(Ctx& ctx) {
  ctx.run("structural: cached scopes equal recomputed scopes", [&] {
    Rng rng(ctx.opts.seed ^ 0x51);
    for (int i = 0; i < 30; ++i) {
      const int d = 2 + int(rng.uniform_int(8));
      Model m = random_model(rng, d, i % 2 == 0 ? ModelClass::Monotone : ModelClass::SquaredComplex);
      for (const Circuit& c : {m.components[0], m.normalizer}) {
        if (!c.scopes_consistent()) {
          ctx.fail("scope_consistency", "scope cache mismatch", circuit_to_json(c));
        }
      }
    }
    return "30 models";
  });

  ctx.run("structural: region-graph models are structured-decomposable", [&] {
    Rng rng(ctx.opts.seed ^ 0x52);
    for (int i = 0; i < 20; ++i) {
      const int d = 2 + int(rng.uniform_int(8));
      Model m = random_model(rng, d, ModelClass::SquaredComplex);
      if (!structured_decomposable(m.components[0])) {
        ctx.fail("structured", "model is not structured-decomposable",
                 circuit_to_json(m.components[0]));
      }
    }
    return "20 models";
  });

  ctx.run("structural: same-region-graph circuits are compatible", [&] {
    Rng rng(ctx.opts.seed ^ 0x53);
    for (int i = 0; i < 20; ++i) {
      const int d = 2 + int(rng.uniform_int(8));
      auto [a, b] = random_compatible_pair(rng, d);
      if (!check_compatible(a, b).compatible) {
        ctx.fail("same_rg_compat", "same-region-graph circuits incompatible",
                 circuit_to_json(a) + circuit_to_json(b));
      }
    }
    return "20 pairs";
  });

  ctx.run("structural: built monotone models pass the monotonicity check", [&] {
    Rng rng(ctx.opts.seed ^ 0x54);
    for (int i = 0; i < 10; ++i) {
      Model m = random_model(rng, 2 + int(rng.uniform_int(6)), ModelClass::Monotone);
      if (!check_monotone(m.components[0])) {
        ctx.fail("monotone", "monotone model failed check_monotone",
                 circuit_to_json(m.components[0]));
      }
    }
    return "10 models";
  });
}

// ------------------------------------------------------------------ multiply

void suite_multiply(Ctx& ctx) {
  ctx.run("multiply: exhaustive product correctness and size bound", [&] {
    Rng rng(ctx.opts.seed ^ 0x61);
    const int pairs = 200;
    for (int i = 0; i < pairs; ++i) {
      const int d = 2 + int(rng.uniform_int(std::uint64_t(std::max(1, ctx.opts.max_vars - 1))));
      auto [c1, c2] = random_compatible_pair(rng, d);
      const Circuit prod = multiply(c1, c2);
      if (prod.num_edges() > c1.num_edges() * c2.num_edges()) {
        ctx.fail("multiply_size", "size bound |c''| <= |c1||c2| violated",
                 circuit_to_json(c1) + circuit_to_json(c2));
      }
      const std::uint64_t n = assignment_count(*c1.var_table());
      for (std::uint64_t a = 0; a < n; ++a) {
        const Assignment x = assignment_from_index(*c1.var_table(), a);
        const Cplx lhs = evaluate(prod, x, EvalMode::Linear);
        const Cplx rhs =
            evaluate(c1, x, EvalMode::Linear) * evaluate(c2, x, EvalMode::Linear);
        if (!close(lhs, rhs, 1e-10, 1e-12)) {
          ctx.fail("multiply_pointwise", "product mismatch at assignment " + std::to_string(a),
                   circuit_to_json(c1) + circuit_to_json(c2));
        }
      }
    }
    return std::to_string(pairs) + " pairs, exhaustive";
  });

  ctx.run("multiply: memoization does not change the function", [&] {
    Rng rng(ctx.opts.seed ^ 0x62);
    for (int i = 0; i < 10; ++i) {
      const int d = 2 + int(rng.uniform_int(3));
      auto [c1, c2] = random_compatible_pair(rng, d);
      const Circuit with = multiply(c1, c2, true);
      const Circuit without = multiply(c1, c2, false);
      const std::uint64_t n = assignment_count(*c1.var_table());
      for (std::uint64_t a = 0; a < n; ++a) {
        const Assignment x = assignment_from_index(*c1.var_table(), a);
        if (!close(evaluate(with, x, EvalMode::Linear), evaluate(without, x, EvalMode::Linear),
                   1e-12, 1e-14)) {
          ctx.fail("multiply_cache", "cache changed the computed function",
                   circuit_to_json(c1) + circuit_to_json(c2));
        }
      }
    }
    return "10 pairs";
  });

  ctx.run("multiply: same-region-graph products stay compatible with factors", [&] {
    Rng rng(ctx.opts.seed ^ 0x63);
    for (int i = 0; i < 10; ++i) {
      auto [c1, c2] = random_compatible_pair(rng, 2 + int(rng.uniform_int(5)));
      const Circuit prod = multiply(c1, c2);
      if (!check_compatible(prod, c1).compatible || !check_compatible(prod, c2).compatible) {
        ctx.fail("multiply_structured", "product lost compatibility with its factors",
                 circuit_to_json(prod));
      }
    }
    return "10 pairs";
  });
}

// ------------------------------------------------------------------ semiring

void suite_semiring(Ctx& ctx) {
  ctx.run("semiring: log-sum-exp matches extended precision across 1e+-200", [&] {
    Rng rng(ctx.opts.seed ^ 0x71);
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<std::pair<Cplx, LogComplex>> terms;
      std::complex<long double> exact(0.0L, 0.0L);
      for (int i = 0; i < 1000; ++i) {
        const double mag = rng.uniform(-200.0 * 2.302585092994046, 200.0 * 2.302585092994046);
        const double arg = rng.uniform(-3.141592653589793, 3.141592653589793);
        const Cplx w(rng.normal(), rng.normal());
        terms.push_back({w, LogComplex{mag, arg}});
        const long double m = std::exp((long double)mag);
        exact += std::complex<long double>(w.real(), w.imag()) *
                 std::complex<long double>(m * std::cos((long double)arg),
                                           m * std::sin((long double)arg));
      }
      const LogComplex got = logsumexp_complex(terms);
      const Cplx got_lin = exp_complex(LogComplex{got.log_mag - std::log(std::abs(exact)), got.arg});
      const std::complex<long double> unit = exact / std::abs(exact);
      if (!std::isfinite(got.log_mag) ||
          !close(got_lin, Cplx(double(unit.real()), double(unit.imag())), 1e-9, 1e-12)) {
        throw Error("log-sum-exp drifted from the extended-precision oracle");
      }
    }
    return "5 x 1000 terms";
  });

  ctx.run("semiring: linear, log-sign and log-complex agree", [&] {
    Rng rng(ctx.opts.seed ^ 0x72);
    for (int i = 0; i < 1000; ++i) {
      const int d = 2 + int(rng.uniform_int(4));
      const bool real = i % 2 == 0;
      Model m = random_model(rng, d, real ? ModelClass::SquaredReal : ModelClass::SquaredComplex, 2);
      const Circuit& c = m.components[0];
      const Assignment x = assignment_from_index(*c.var_table(), rng.uniform_int(1ull << d));
      const Cplx lin = evaluate(c, x, EvalMode::Linear);
      const Cplx logc = evaluate(c, x, EvalMode::LogComplex);
      if (!close(lin, logc, 1e-9, 1e-300)) {
        ctx.fail("semiring_agree", "linear and log-complex disagree", circuit_to_json(c));
      }
      if (real) {
        const Cplx ls = evaluate(c, x, EvalMode::LogSign);
        if (!close(lin, ls, 1e-9, 1e-300)) {
          ctx.fail("semiring_agree", "linear and log-sign disagree", circuit_to_json(c));
        }
      }
    }
    return "1000 circuits";
  });

  ctx.run("semiring: squared circuits are nonnegative and Z matches enumeration", [&] {
    Rng rng(ctx.opts.seed ^ 0x73);
    for (int i = 0; i < 100; ++i) {
      const int d = 2 + int(rng.uniform_int(9));
      Model m = random_model(rng, d, ModelClass::SquaredComplex);
      const Circuit& c = m.components[0];
      const Circuit& sq = m.normalizer;
      double z_exhaustive = 0.0;
      const std::uint64_t n = assignment_count(*c.var_table());
      for (std::uint64_t a = 0; a < n; ++a) {
        const Assignment x = assignment_from_index(*c.var_table(), a);
        const Cplx cv = evaluate(c, x, EvalMode::Linear);
        const Cplx sv = evaluate(sq, x, EvalMode::Linear);
        const double expect = std::norm(cv);
        if (!close(sv.real(), expect, 1e-10, 1e-12) ||
            std::abs(sv.imag()) > 1e-12 * std::max(1.0, std::abs(sv)) ||
            sv.real() < -1e-12) {
          ctx.fail("square_nonneg", "square is not the modulus square", circuit_to_json(c));
        }
        z_exhaustive += expect;
      }
      const Cplx z = partition_function(sq);
      if (!close(z.real(), z_exhaustive, 1e-9)) {
        ctx.fail("square_z", "partition function disagrees with enumeration",
                 circuit_to_json(sq));
      }
    }
    return "100 circuits";
  });

  ctx.run("semiring: marginalizing variables one at a time matches joint", [&] {
    Rng rng(ctx.opts.seed ^ 0x74);
    for (int i = 0; i < 20; ++i) {
      const int d = 3 + int(rng.uniform_int(5));
      Model m = random_model(rng, d, ModelClass::Monotone);
      const Circuit& c = m.components[0];
      const int v1 = int(rng.uniform_int(d));
      int v2 = int(rng.uniform_int(d));
      if (v2 == v1) v2 = (v2 + 1) % d;
      const Scope keep_one = Scope::full(d).minus(Scope::singleton(d, v1));
      const Scope keep_none = keep_one.minus(Scope::singleton(d, v2));
      const Assignment x = assignment_from_index(*c.var_table(), rng.uniform_int(1ull << d));
      // integrate v1 in one pass, then v2 by explicit summation
      Assignment x2 = x;
      double two_step = 0.0;
      for (int val = 0; val < 2; ++val) {
        x2[v2] = val;
        two_step += marginalize(c, keep_one, x2).real();
      }
      const double joint = marginalize(c, keep_none, x).real();
      if (!close(two_step, joint, 1e-10, 1e-300)) {
        ctx.fail("marginal_consistency", "iterated and joint marginalization disagree",
                 circuit_to_json(c));
      }
    }
    return "20 circuits";
  });

  ctx.run("semiring: monotone marginal equals exhaustive sum", [&] {
    Rng rng(ctx.opts.seed ^ 0x75);
    Model m = random_model(rng, 10, ModelClass::Monotone);
    const Circuit& c = m.components[0];
    double total = 0.0;
    for (std::uint64_t a = 0; a < 1024; ++a) {
      total += evaluate(c, assignment_from_index(*c.var_table(), a), EvalMode::Linear).real();
    }
    const double z = partition_function(c).real();
    if (!close(total, z, 1e-9)) throw Error("marginal does not match the exhaustive sum");
    return "10 boolean variables";
  });
}

// ----------------------------------------------------------------- gradients

void suite_gradients(Ctx& ctx) {
  ctx.run("gradients: finite differences agree for every model class", [&] {
    Rng rng(ctx.opts.seed ^ 0x81);
    const ModelClass classes[] = {ModelClass::Monotone, ModelClass::SquaredReal,
                                  ModelClass::SquaredComplex, ModelClass::Socs,
                                  ModelClass::MonotoneTimesSocs};
    for (ModelClass cls : classes) {
      LayerSpec spec;
      spec.model_class = cls;
      spec.sum_units = cls == ModelClass::Socs ? 1 : 2;  // socs(4) stays under 200 params
      spec.input_units = 2;
      spec.num_squares = cls == ModelClass::Socs ? 4 : 1;
      spec.seed = rng.next_u64();
      spec.input_family = cls == ModelClass::Monotone ? InputFamily::Categorical
                          : cls == ModelClass::SquaredReal ? InputFamily::EmbeddingReal
                                                           : InputFamily::EmbeddingComplex;
      const int d = 3;
      auto rg = std::make_shared<RegionGraph>(RegionGraph::random_binary_tree(d, spec.seed));
      Model m = build(rg, boolean_variables(d), spec);
      if (m.num_params() > 200) throw Error(to_string(cls) + ": too many parameters");

      // Check at the best-conditioned assignments: near-zero circuit values
      // make log-likelihoods too curved for finite differences to resolve
      // at h = 1e-5.
      std::vector<std::pair<double, std::uint64_t>> ranked;
      for (std::uint64_t a = 0; a < (1ull << d); ++a) {
        const Assignment x = assignment_from_index(*m.vars, a);
        double mag = 0.0;
        for (const Circuit& comp : m.components) {
          mag += std::abs(evaluate(comp, x, EvalMode::Linear, m.theta()));
        }
        ranked.push_back({mag, a});
      }
      std::sort(ranked.begin(), ranked.end(),
                [](const auto& a, const auto& b) { return a.first > b.first; });
      std::vector<Assignment> batch_rows;
      for (int i = 0; i < 4; ++i) {
        batch_rows.push_back(assignment_from_index(*m.vars, ranked[i].second));
      }
      std::vector<const Assignment*> batch;
      for (const auto& r : batch_rows) batch.push_back(&r);

      std::vector<double> grad(m.params.size(), 0.0);
      nll_batch_grad(m, batch, grad);

      Model probe = m;
      auto loss_fn = [&](const std::vector<double>& theta) {
        probe.params = theta;
        return nll_batch(probe, batch).loss;
      };
      const std::vector<double> fd = finite_difference_gradient(loss_fn, m.params, 1e-5);
      for (std::size_t i = 0; i < grad.size(); ++i) {
        if (!close(grad[i], fd[i], 1e-4, 1e-7)) {
          std::ostringstream os;
          os << to_string(cls) << ": parameter " << m.param_names[i] << " analytic " << grad[i]
             << " vs finite-difference " << fd[i];
          throw Error(os.str());
        }
      }
    }
    return "5 model classes";
  });

  ctx.run("gradients: single-gaussian mean gradient is mu - x", [&] {
    auto vars = std::make_shared<VariableTable>(
        std::vector<Variable>{{"X1", Domain::real_line()}});
    LayerSpec spec;
    spec.model_class = ModelClass::Monotone;
    spec.input_family = InputFamily::Gaussian;
    auto rg = std::make_shared<RegionGraph>(RegionGraph::random_binary_tree(1, 0));
    Model m = build(rg, vars, spec);
    // pin mean = 1, log_stddev = 0
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      if (m.param_names[i].find("mean") != std::string::npos) m.params[i] = 1.0;
      if (m.param_names[i].find("log_stddev") != std::string::npos) m.params[i] = 0.0;
    }
    Assignment x{0.0};
    std::vector<const Assignment*> batch{&x};
    std::vector<double> grad(m.params.size(), 0.0);
    nll_batch_grad(m, batch, grad);
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      if (m.param_names[i].find("mean") != std::string::npos) {
        if (!close(grad[i], 1.0, 1e-9, 1e-9)) {
          throw Error("expected dNLL/dmean = +1, got " + std::to_string(grad[i]));
        }
      }
    }
    return "dNLL/dmean = mu - x";
  });
}

// --------------------------------------------------------------- separations

void suite_separations(Ctx& ctx) {
  ctx.run("separations: sum function circuit, SOS form and formula agree", [&] {
    for (int k = 1; k <= 3; ++k) {
      const Circuit mono = build_sum_function(k);
      const Circuit sos = build_sum_function_sos(k);
      if (!check_monotone(mono)) throw Error("sum function circuit is not monotone");
      if (!structured_decomposable(mono)) throw Error("sum function is not structured");
      if (sos.socs_structure()->components.size() != std::size_t(k) * k) {
        throw Error("SOS form must have k^2 squares");
      }
      const std::uint64_t n = assignment_count(*mono.var_table());
      for (std::uint64_t a = 0; a < n; ++a) {
        const Assignment x = assignment_from_index(*mono.var_table(), a);
        const double expect = eval_sum_function(k, x);
        const double got_mono = evaluate(mono, x, EvalMode::Linear).real();
        const double got_sos = evaluate(sos, x, EvalMode::Linear).real();
        // integer-valued function: exact after rounding, and within 1e-9 raw
        if (got_mono != expect || std::nearbyint(got_sos) != expect ||
            std::abs(got_sos - expect) > 1e-9 * std::max(1.0, expect)) {
          throw Error("sum function mismatch at assignment " + std::to_string(a));
        }
      }
    }
    return "k = 1..3, exhaustive";
  });

  ctx.run("separations: plus-sum SOS equals its formula with |V|^2+1 squares", [&] {
    for (int nv = 1; nv <= 3; ++nv) {
      GraphSpec g = nv == 1 ? GraphSpec{1, {}} : GraphSpec::path(nv);
      const Circuit c = build_udisj_plus_sum(g);
      const std::size_t expect_squares = std::size_t(nv) * nv + 1;
      if (c.socs_structure()->components.size() != expect_squares) {
        throw Error("plus-sum square count must be |V|^2 + 1");
      }
      const std::uint64_t n = assignment_count(*c.var_table());
      for (std::uint64_t a = 0; a < n; ++a) {
        const Assignment x = assignment_from_index(*c.var_table(), a);
        const double got = evaluate(c, x, EvalMode::Linear).real();
        const double expect = eval_udisj_plus_sum(g, x);
        if (std::nearbyint(got) != expect ||
            std::abs(got - expect) > 1e-9 * std::max(1.0, expect)) {
          throw Error("plus-sum mismatch at assignment " + std::to_string(a));
        }
      }
    }
    return "|V| = 1..3, exhaustive";
  });

  ctx.run("separations: selector slices reproduce the two factors", [&] {
    const GraphSpec g = GraphSpec::single_edge();
    const Circuit ups = build_udisj_plus_sum(g);
    const int z1 = ups_z1_index(g), z2 = ups_z2_index(g);
    const int nvars = ups.var_table()->size();
    // slice Z1=1, Z2=0: the unique-disjointness square over X'
    {
      Scope assigned(nvars);
      assigned.add(z1);
      assigned.add(z2);
      Assignment vals(nvars, 0.0);
      vals[z1] = 1.0;
      const Circuit sliced = condition(ups, assigned, vals);
      const std::uint64_t n = 1ull << (nvars - 2);
      for (std::uint64_t a = 0; a < n; ++a) {
        Assignment x(nvars, 0.0);
        for (int t = 0; t < nvars - 2; ++t) x[t] = double((a >> t) & 1);
        const double got = evaluate(sliced, x, EvalMode::Linear).real();
        if (std::abs(got - eval_udisj(g, x)) > 1e-9) {
          throw Error("Z1-slice does not reproduce the unique-disjointness square");
        }
      }
    }
    // slice Z1=0, Z2=1: the sum function over X', X''
    {
      Scope assigned(nvars);
      assigned.add(z1);
      assigned.add(z2);
      Assignment vals(nvars, 0.0);
      vals[z2] = 1.0;
      const Circuit sliced = condition(ups, assigned, vals);
      const std::uint64_t n = 1ull << (nvars - 2);
      for (std::uint64_t a = 0; a < n; ++a) {
        Assignment x(nvars, 0.0);
        for (int t = 0; t < nvars - 2; ++t) x[t] = double((a >> t) & 1);
        double inner = 0.0;
        for (int v = 0; v < g.vertices; ++v) {
          double row = 0.0;
          for (int jj = 0; jj < g.vertices; ++jj) {
            row += std::ldexp(1.0, jj) * x[g.vertices + v * g.vertices + jj];
          }
          inner += x[v] * row;
        }
        const double got = evaluate(sliced, x, EvalMode::Linear).real();
        if (std::abs(got - inner) > 1e-9) {
          throw Error("Z2-slice does not reproduce the sum function");
        }
      }
    }
    return "single edge, both slices";
  });

  ctx.run("separations: times-quadratic SOS equals its formula with |E|+1 squares", [&] {
    const GraphSpec graphs[] = {GraphSpec::single_edge(), GraphSpec::path(3),
                                GraphSpec::triangle(), GraphSpec::path(4)};
    for (const GraphSpec& g : graphs) {
      const Circuit c = build_udisj_times_quadratic(g);
      if (c.socs_structure()->components.size() != g.edges.size() + 1) {
        throw Error("times-quadratic square count must be |E| + 1");
      }
      const std::uint64_t n = assignment_count(*c.var_table());
      for (std::uint64_t a = 0; a < n; ++a) {
        const Assignment x = assignment_from_index(*c.var_table(), a);
        const double got = evaluate(c, x, EvalMode::Linear).real();
        const double expect = eval_udisj_times_quadratic(g, x);
        if (std::nearbyint(got) != expect ||
            std::abs(got - expect) > 1e-9 * std::max(1.0, std::abs(expect))) {
          throw Error("times-quadratic mismatch");
        }
      }
    }
    return "4 graphs, exhaustive";
  });

  ctx.run("separations: unique-disjointness square matches its formula", [&] {
    const GraphSpec graphs[] = {GraphSpec::single_edge(), GraphSpec::triangle()};
    for (const GraphSpec& g : graphs) {
      const Circuit c = build_udisj(g);
      const std::uint64_t n = assignment_count(*c.var_table());
      for (std::uint64_t a = 0; a < n; ++a) {
        const Assignment x = assignment_from_index(*c.var_table(), a);
        if (std::abs(evaluate(c, x, EvalMode::Linear).real() - eval_udisj(g, x)) > 1e-9) {
          throw Error("unique-disjointness mismatch");
        }
      }
    }
    return "2 graphs, exhaustive";
  });

  ctx.run("separations: value matrix of the binary sum reproduces i + j", [&] {
    const ValueMatrix m = binary_sum_value_matrix(3, 2);
    for (std::size_t i = 0; i < m.rows; ++i) {
      for (std::size_t j = 0; j < m.cols; ++j) {
        if (m.at(i, j) != double(i + j)) {
          throw Error("binary sum value matrix entry mismatch");
        }
      }
    }
    return "rows 000..111 equal [0..3]..[7..10]";
  });

  ctx.run("separations: prime matrix and its square-root rank", [&] {
    const auto k = prime_matrix(3);
    const double expect[3][3] = {{3, 4, 5}, {4, 5, 6}, {5, 6, 7}};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (k[i][j] != expect[i][j]) throw Error("prime matrix mismatch");
      }
    }
    if (sqrank_bruteforce(k) != 3) throw Error("square-root rank of the 3x3 prime matrix is 3");
    if (sqrank_bruteforce({{1, 1}, {1, 1}}) != 1) throw Error("all-ones matrix has sqrank 1");
    return "q = 3";
  });

  ctx.run("separations: motzkin family values and probes", [&] {
    if (motzkin_polynomial(1, 1) != 0.0) throw Error("F(1,1) must be 0");
    if (motzkin_polynomial(0, 0) != 1.0) throw Error("F(0,0) must be 1");
    if (motzkin_polynomial(2, 1) != 9.0) throw Error("F(2,1) must be 9");
    Rng rng(ctx.opts.seed ^ 0x91);
    for (int d : {0, 2, 4}) {
      const Circuit c = build_motzkin_extension(d);
      if (!structured_decomposable(c)) throw Error("motzkin circuit is not structured");
      for (int probe = 0; probe < 1000; ++probe) {
        Assignment x(2 + d);
        for (auto& v : x) v = rng.uniform(-3.0, 3.0);
        const double got = evaluate(c, x, EvalMode::Linear).real();
        const double expect = eval_motzkin_extension(d, x);
        if (!close(got, expect, 1e-9, 1e-12)) throw Error("motzkin circuit mismatch");
        if (got < -1e-12) throw Error("motzkin value must be nonnegative");
      }
    }
    return "d in {0,2,4}, 1000 probes each";
  });

  ctx.run("separations: conditioning the motzkin family recovers the polynomial", [&] {
    const int d = 3;
    const Circuit c = build_motzkin_extension(d);
    Scope assigned(2 + d);
    Assignment vals(2 + d, 0.0);
    for (int i = 0; i < d; ++i) assigned.add(2 + i);
    const Circuit sliced = condition(c, assigned, vals);
    Rng rng(ctx.opts.seed ^ 0x92);
    for (int probe = 0; probe < 200; ++probe) {
      Assignment x(2 + d, 0.0);
      x[0] = rng.uniform(-3.0, 3.0);
      x[1] = rng.uniform(-3.0, 3.0);
      const double got = evaluate(sliced, x, EvalMode::Linear).real();
      if (!close(got, motzkin_polynomial(x[0], x[1]), 1e-9, 1e-12)) {
        throw Error("conditioned motzkin circuit mismatch");
      }
    }
    return "Y := 0 recovers the bivariate polynomial";
  });
}

// ---------------------------------------------------------------- reductions

void suite_reductions(Ctx& ctx) {
  ctx.run("reductions: born machine matches the direct contraction", [&] {
    Rng rng(ctx.opts.seed ^ 0xa1);
    MPS m;
    m.field = Field::Complex;
    m.d = 5;
    m.v = 2;
    m.r = 3;
    for (int j = 0; j < m.d; ++j) {
      const std::size_t sz = (j == 0 || j == m.d - 1) ? std::size_t(m.v) * m.r
                                                      : std::size_t(m.v) * m.r * m.r;
      std::vector<Cplx> t(sz);
      for (auto& e : t) e = Cplx(rng.normal(), rng.normal());
      m.tensors.push_back(std::move(t));
    }
    const Circuit psi = mps_to_circuit(m);
    const Circuit bm = born_machine(m);
    for (std::uint64_t a = 0; a < 32; ++a) {
      std::vector<int> xi(5);
      Assignment x(5);
      for (int t = 0; t < 5; ++t) {
        xi[t] = int((a >> t) & 1);
        x[t] = double(xi[t]);
      }
      const Cplx direct = m.contract(xi);
      if (!close(evaluate(psi, x, EvalMode::Linear), direct, 1e-9, 1e-12)) {
        throw Error("MPS circuit disagrees with the contraction");
      }
      if (!close(evaluate(bm, x, EvalMode::Linear).real(), std::norm(direct), 1e-9, 1e-12)) {
        throw Error("born machine disagrees with |psi|^2");
      }
    }
    return "d=5, v=2, r=3, all 32 assignments";
  });

  ctx.run("reductions: complex squares decompose into two compatible real squares", [&] {
    Rng rng(ctx.opts.seed ^ 0xa2);
    for (int i = 0; i < 50; ++i) {
      const int d = 2 + int(rng.uniform_int(5));
      Model m = random_model(rng, d, ModelClass::SquaredComplex);
      const Circuit& c = m.components[0];
      const auto parts = hypercomplex_decompose(c);
      if (parts.size() != 2) throw Error("complex circuit must split into two real circuits");
      if (!check_compatible(parts[0], parts[1]).compatible) {
        ctx.fail("decompose_compat", "decomposition parts are incompatible", circuit_to_json(c));
      }
      const Circuit sos = socs_sum(parts);
      const Circuit sq = square(c);
      const std::uint64_t n = assignment_count(*c.var_table());
      for (std::uint64_t a = 0; a < n; ++a) {
        const Assignment x = assignment_from_index(*c.var_table(), a);
        const Cplx lhs = evaluate(sos, x, EvalMode::Linear);
        const Cplx rhs = evaluate(sq, x, EvalMode::Linear);
        if (!close(lhs, rhs, 1e-10, 1e-12)) {
          ctx.fail("decompose_value", "sum of squares disagrees with the modulus square",
                   circuit_to_json(c));
        }
      }
    }
    return "50 circuits, exhaustive";
  });

  ctx.run("reductions: PSD and sum-of-squares round trips are pointwise exact", [&] {
    Rng rng(ctx.opts.seed ^ 0xa3);
    const int d = 4;
    auto rg = std::make_shared<RegionGraph>(RegionGraph::random_binary_tree(d, 7));
    auto vars = boolean_variables(d);
    std::vector<Circuit> comps;
    for (int i = 0; i < 3; ++i) {
      LayerSpec spec;
      spec.model_class = ModelClass::SquaredReal;
      spec.input_family = InputFamily::EmbeddingReal;
      spec.sum_units = 2;
      spec.input_units = 2;
      spec.seed = rng.next_u64();
      comps.push_back(build(rg, vars, spec).components[0]);
    }
    // random PSD matrix A = B^T B
    std::vector<std::vector<double>> bmat(3, std::vector<double>(3));
    for (auto& row : bmat) {
      for (auto& e : row) e = rng.normal();
    }
    PSDModel p;
    p.components = comps;
    p.matrix.assign(3, std::vector<double>(3, 0.0));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) p.matrix[i][j] += bmat[k][i] * bmat[k][j];
      }
    }
    const Circuit sos = psd_to_socs(p);
    for (std::uint64_t a = 0; a < 16; ++a) {
      const Assignment x = assignment_from_index(*vars, a);
      if (!close(evaluate(sos, x, EvalMode::Linear).real(), p.eval(x).real(), 1e-9, 1e-12)) {
        throw Error("PSD to sum-of-squares mismatch");
      }
    }
    // converse: identity matrix round trip
    const Circuit direct = socs_sum(comps);
    const PSDModel back = socs_to_psd(direct);
    const Circuit again = psd_to_socs(back);
    for (std::uint64_t a = 0; a < 16; ++a) {
      const Assignment x = assignment_from_index(*vars, a);
      if (!close(evaluate(again, x, EvalMode::Linear).real(),
                 evaluate(direct, x, EvalMode::Linear).real(), 1e-9, 1e-12)) {
        throw Error("sum-of-squares / PSD round trip mismatch");
      }
    }
    // rank-one check: A = [[1,1],[1,1]] is the single square (c1 + c2)^2
    PSDModel ones;
    ones.components = {comps[0], comps[1]};
    ones.matrix = {{1.0, 1.0}, {1.0, 1.0}};
    const Circuit ones_sos = psd_to_socs(ones);
    if (ones_sos.socs_structure()->components.size() != 1) {
      throw Error("rank-one PSD matrix must give a single square");
    }
    for (std::uint64_t a = 0; a < 16; ++a) {
      const Assignment x = assignment_from_index(*vars, a);
      if (!close(evaluate(ones_sos, x, EvalMode::Linear).real(), ones.eval(x).real(), 1e-9,
                 1e-12)) {
        throw Error("rank-one PSD mismatch");
      }
    }
    return "3 components, round trips exact";
  });

  ctx.run("reductions: squared neural families match the direct formula", [&] {
    Rng rng(ctx.opts.seed ^ 0xa4);
    for (const auto sigma : {SnefySpec::Sigma::Exp, SnefySpec::Sigma::Cos}) {
      SnefySpec s;
      s.sigma = sigma;
      const int R = 2, S = 4, d = 2;
      s.V.assign(R, std::vector<double>(S));
      for (auto& row : s.V) {
        for (auto& e : row) e = rng.normal();
      }
      s.W.assign(S, std::vector<double>(d));
      for (auto& row : s.W) {
        for (auto& e : row) e = rng.normal(0.0, 0.5);
      }
      s.b.assign(S, 0.0);
      for (auto& e : s.b) e = rng.normal(0.0, 0.5);
      for (int u = 0; u < d; ++u) {
        SnefySpec::Var v;
        v.finite = false;
        v.mu_mean = rng.normal(0.0, 0.5);
        v.mu_stddev = 0.8 + rng.uniform();
        s.vars.push_back(v);
      }
      const Circuit c = snefy_to_socs(s);
      for (int probe = 0; probe < 1000; ++probe) {
        Assignment x(d);
        for (auto& v : x) v = rng.uniform(-2.5, 2.5);
        const Cplx got = evaluate(c, x, EvalMode::Linear);
        const double expect = s.direct(x);
        if (!close(got.real(), expect, 1e-6, 1e-9) ||
            std::abs(got.imag()) > 1e-9 * std::max(1.0, std::abs(expect))) {
          throw Error("squared neural family circuit mismatch");
        }
      }
    }
    return "exp and cos, 1000 probes each";
  });

  ctx.run("reductions: unrolled sums of squares equal their monotone source", [&] {
    Rng rng(ctx.opts.seed ^ 0xa5);
    for (int i = 0; i < 10; ++i) {
      const int d = 2 + int(rng.uniform_int(5));
      LayerSpec spec;
      spec.model_class = ModelClass::Monotone;
      spec.input_family = InputFamily::Categorical;
      spec.sum_units = 1 + int(rng.uniform_int(2));
      spec.input_units = 1;
      spec.seed = rng.next_u64();
      auto rg = std::make_shared<RegionGraph>(RegionGraph::random_binary_tree(d, rng.next_u64()));
      Model m = build(rg, boolean_variables(d), spec);
      // rewrite categorical leaves as indicator mixtures for the unroller
      Circuit c = m.components[0];
      CircuitBuilder b(c.var_table(), Field::Real);
      std::vector<UnitId> remap(c.num_units());
      for (UnitId id : c.topo_order()) {
        const Unit& u = c.unit(id);
        switch (u.kind) {
          case UnitKind::Input: {
            const auto& cat = std::get<Categorical>(u.fn->fn);
            std::vector<UnitId> ins;
            std::vector<WeightExpr> ws;
            for (std::size_t vv = 0; vv < cat.probs.size(); ++vv) {
              ins.push_back(b.add_input(u.var, InputFunction(Indicator{int(vv)})));
              ws.push_back(WeightExpr::lit(cat.probs[vv].get(nullptr)));
            }
            remap[id] = b.add_sum(std::move(ins), std::move(ws));
            break;
          }
          case UnitKind::Sum: {
            std::vector<UnitId> ins;
            std::vector<WeightExpr> ws;
            for (int k = 0; k < u.fan_in(); ++k) {
              ins.push_back(remap[u.inputs[k]]);
              ws.push_back(WeightExpr::lit(u.weights[k].value(nullptr)));
            }
            remap[id] = b.add_sum(std::move(ins), std::move(ws));
            break;
          }
          case UnitKind::Product:
            remap[id] = b.add_product({remap[u.inputs[0]], remap[u.inputs[1]]});
            break;
        }
      }
      const Circuit indicators = b.build(remap[c.output()]);
      const Circuit sos = unroll_to_sos(indicators, 1 << 14);
      const std::uint64_t n = assignment_count(*c.var_table());
      for (std::uint64_t a = 0; a < n; ++a) {
        const Assignment x = assignment_from_index(*c.var_table(), a);
        const double lhs = evaluate(sos, x, EvalMode::Linear).real();
        const double rhs = evaluate(indicators, x, EvalMode::Linear).real();
        if (!close(lhs, rhs, 1e-10, 1e-13)) {
          ctx.fail("unroll_value", "unrolled form disagrees with the source",
                   circuit_to_json(indicators));
        }
      }
    }
    return "10 monotone circuits, exhaustive";
  });
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {"structural", "multiply",  "semiring",
                                                 "gradients",  "separations", "reductions"};
  return names;
}

std::vector<CheckResult> verify_suite(const std::string& suite, const VerifyOptions& opts) {
  Ctx ctx(opts);
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "structural") {
    suite_structural(ctx);
    known = true;
  }
  if (all || suite == "multiply") {
    suite_multiply(ctx);
    known = true;
  }
  if (all || suite == "semiring") {
    suite_semiring(ctx);
    known = true;
  }
  if (all || suite == "gradients") {
    suite_gradients(ctx);
    known = true;
  }
  if (all || suite == "separations") {
    suite_separations(ctx);
    known = true;
  }
  if (all || suite == "reductions") {
    suite_reductions(ctx);
    known = true;
  }
  if (!known) throw ConfigError("unknown suite: " + suite);
  return std::move(ctx.results);
}

}  // namespace socs
