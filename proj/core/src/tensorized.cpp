#include "socs/tensorized.hpp"

#include <cmath>
#include <functional>

#include "socs/compose.hpp"
#include "socs/errors.hpp"
#include "socs/rng.hpp"

namespace socs {

std::string to_string(ModelClass c) {
  switch (c) {
    case ModelClass::Monotone:
      return "monotone";
    case ModelClass::SquaredReal:
      return "squared_real";
    case ModelClass::SquaredComplex:
      return "squared_complex";
    case ModelClass::Socs:
      return "socs";
    case ModelClass::MonotoneTimesSocs:
      return "musocs";
  }
  return "?";
}

std::string to_string(InputFamily f) {
  switch (f) {
    case InputFamily::Categorical:
      return "categorical";
    case InputFamily::Gaussian:
      return "gaussian";
    case InputFamily::EmbeddingReal:
      return "embedding";
    case InputFamily::EmbeddingComplex:
      return "embedding_complex";
  }
  return "?";
}

ModelClass model_class_from_string(const std::string& s) {
  if (s == "monotone") return ModelClass::Monotone;
  if (s == "squared_real") return ModelClass::SquaredReal;
  if (s == "squared_complex") return ModelClass::SquaredComplex;
  if (s == "socs") return ModelClass::Socs;
  if (s == "musocs") return ModelClass::MonotoneTimesSocs;
  throw ConfigError("unknown model_class: " + s);
}

InputFamily input_family_from_string(const std::string& s) {
  if (s == "categorical") return InputFamily::Categorical;
  if (s == "gaussian") return InputFamily::Gaussian;
  if (s == "embedding") return InputFamily::EmbeddingReal;
  if (s == "embedding_complex") return InputFamily::EmbeddingComplex;
  throw ConfigError("unknown input_family: " + s);
}

namespace {

enum class WeightKind { MonotoneLog, RealDirect, ComplexPair };

struct ParamAlloc {
  std::vector<double>& params;
  std::vector<std::string>& names;

  int alloc(std::string name, double init) {
    params.push_back(init);
    names.push_back(std::move(name));
    return static_cast<int>(params.size()) - 1;
  }
};

WeightExpr make_weight(WeightKind k, ParamAlloc& pa, const std::string& name, Rng& rng,
                       int fan_in) {
  switch (k) {
    case WeightKind::MonotoneLog: {
      const double init = rng.normal(0.0, 0.1);
      return WeightExpr::slot_exp(pa.alloc(name, init), init);
    }
    case WeightKind::RealDirect: {
      const double init = rng.normal(0.0, 1.0 / std::sqrt(double(fan_in)));
      return WeightExpr::slot_ref(pa.alloc(name, init), init);
    }
    case WeightKind::ComplexPair: {
      const double sd = 1.0 / std::sqrt(2.0 * fan_in);
      const double re = rng.normal(0.0, sd);
      const double im = rng.normal(0.0, sd);
      const int sr = pa.alloc(name + ".re", re);
      const int si = pa.alloc(name + ".im", im);
      return WeightExpr::complex_slots(sr, si, Cplx(re, im));
    }
  }
  throw ConfigError("unreachable weight kind");
}

InputFunction make_leaf(InputFamily fam, const Domain& d, ParamAlloc& pa, Rng& rng,
                        const std::string& name) {
  switch (fam) {
    case InputFamily::Categorical: {
      if (!d.is_finite()) throw ConfigError("categorical input family needs a finite domain");
      Categorical c;
      for (int v = 0; v < d.cardinality; ++v) {
        const double init = rng.normal(0.0, 0.1);
        const int s = pa.alloc(name + ".p" + std::to_string(v), init);
        c.probs.push_back(ParamField{std::exp(init), s, true});
      }
      return InputFunction(c);
    }
    case InputFamily::Gaussian: {
      if (d.is_finite()) throw ConfigError("gaussian input family needs a continuous domain");
      Gaussian g;
      const double m = rng.normal(0.0, 1.0);
      g.mean = ParamField{m, pa.alloc(name + ".mean", m), false};
      g.log_stddev = ParamField{0.0, pa.alloc(name + ".log_stddev", 0.0), false};
      return InputFunction(g);
    }
    case InputFamily::EmbeddingReal: {
      if (!d.is_finite()) throw ConfigError("embedding input family needs a finite domain");
      Embedding e;
      for (int v = 0; v < d.cardinality; ++v) {
        const double init = rng.normal(0.0, 1.0);
        e.re.push_back(ParamField{init, pa.alloc(name + ".e" + std::to_string(v), init), false});
      }
      return InputFunction(e);
    }
    case InputFamily::EmbeddingComplex: {
      if (!d.is_finite()) throw ConfigError("embedding input family needs a finite domain");
      Embedding e;
      const double sd = 1.0 / std::sqrt(2.0);
      for (int v = 0; v < d.cardinality; ++v) {
        const double re = rng.normal(0.0, sd);
        const double im = rng.normal(0.0, sd);
        const std::string base = name + ".e" + std::to_string(v);
        e.re.push_back(ParamField{re, pa.alloc(base + ".re", re), false});
        e.im.push_back(ParamField{im, pa.alloc(base + ".im", im), false});
      }
      return InputFunction(e);
    }
  }
  throw ConfigError("unreachable input family");
}

Circuit build_component(const RegionGraphPtr& rg, const VariableTablePtr& vars, int ks, int ki,
                        WeightKind wk, InputFamily fam, ParamAlloc& pa, Rng& rng,
                        const std::string& prefix) {
  const Field field = wk == WeightKind::ComplexPair ? Field::Complex : Field::Real;
  CircuitBuilder b(vars, field);
  b.set_region_graph(rg);

  std::function<std::vector<UnitId>(int)> emit = [&](int node_id) -> std::vector<UnitId> {
    const auto& node = rg->node(node_id);
    const std::string rname = prefix + "/r" + std::to_string(node_id);
    std::vector<UnitId> out;
    if (node.is_leaf()) {
      const int var = node.scope.min_index();
      std::vector<UnitId> leaves;
      for (int i = 0; i < ki; ++i) {
        leaves.push_back(
            b.add_input(var, make_leaf(fam, vars->at(var).domain, pa, rng,
                                       rname + "/in" + std::to_string(i))));
      }
      for (int k = 0; k < ks; ++k) {
        std::vector<WeightExpr> ws;
        for (int i = 0; i < ki; ++i) {
          ws.push_back(make_weight(wk, pa,
                                   rname + "/mix" + std::to_string(k) + "." + std::to_string(i),
                                   rng, ki));
        }
        out.push_back(b.add_sum(leaves, std::move(ws)));
      }
      return out;
    }
    const std::vector<UnitId> left = emit(node.left);
    const std::vector<UnitId> right = emit(node.right);
    std::vector<UnitId> prods;
    for (int j = 0; j < ks; ++j) {
      prods.push_back(b.add_product_canonical({left[j], right[j]}));
    }
    for (int k = 0; k < ks; ++k) {
      std::vector<WeightExpr> ws;
      for (int j = 0; j < ks; ++j) {
        ws.push_back(make_weight(
            wk, pa, rname + "/w" + std::to_string(k) + "." + std::to_string(j), rng, ks));
      }
      out.push_back(b.add_sum(prods, std::move(ws)));
    }
    return out;
  };

  std::vector<UnitId> roots = emit(rg->root());
  std::vector<WeightExpr> ws;
  for (int k = 0; k < ks; ++k) {
    ws.push_back(make_weight(wk, pa, prefix + "/out.w" + std::to_string(k), rng, ks));
  }
  return b.build(b.add_sum(std::move(roots), std::move(ws)));
}

InputFamily monotone_family_for(const VariableTable& vars) {
  bool finite = true;
  for (const auto& v : vars.all()) finite = finite && v.domain.is_finite();
  return finite ? InputFamily::Categorical : InputFamily::Gaussian;
}

}  // namespace

Model build(const RegionGraphPtr& rg, const VariableTablePtr& vars, const LayerSpec& spec) {
  if (rg == nullptr || vars == nullptr) throw ConfigError("null region graph or variable table");
  if (rg->num_vars() != vars->size()) {
    throw ConfigError("region graph and variable table disagree on the variable count");
  }
  if (spec.sum_units < 1 || spec.input_units < 1) {
    throw ConfigError("layer sizes must be positive");
  }
  if (spec.num_squares < 1) throw ConfigError("num_squares must be positive");

  Model m;
  m.cls = spec.model_class;
  m.vars = vars;
  m.region_graph = rg;
  m.spec = spec;
  ParamAlloc pa{m.params, m.param_names};
  Rng rng(spec.seed ^ 0x5eed5eed5eedULL);

  switch (spec.model_class) {
    case ModelClass::Monotone: {
      if (spec.input_family == InputFamily::EmbeddingReal ||
          spec.input_family == InputFamily::EmbeddingComplex) {
        throw ConfigError("monotone models require categorical or gaussian input_family");
      }
      Circuit c = build_component(rg, vars, spec.sum_units, spec.input_units,
                                  WeightKind::MonotoneLog, spec.input_family, pa, rng, "c0");
      m.normalizer = c;
      m.components.push_back(std::move(c));
      break;
    }
    case ModelClass::SquaredReal: {
      if (spec.input_family == InputFamily::EmbeddingComplex) {
        throw ConfigError("squared_real models cannot use complex embeddings");
      }
      Circuit c = build_component(rg, vars, spec.sum_units, spec.input_units,
                                  WeightKind::RealDirect, spec.input_family, pa, rng, "c0");
      m.normalizer = square(c);
      m.components.push_back(std::move(c));
      break;
    }
    case ModelClass::SquaredComplex: {
      InputFamily fam = spec.input_family;
      if (fam == InputFamily::EmbeddingReal) fam = InputFamily::EmbeddingComplex;
      Circuit c = build_component(rg, vars, spec.sum_units, spec.input_units,
                                  WeightKind::ComplexPair, fam, pa, rng, "c0");
      m.normalizer = square(c);
      m.components.push_back(std::move(c));
      break;
    }
    case ModelClass::Socs: {
      const bool cplx = spec.input_family == InputFamily::EmbeddingComplex;
      for (int i = 0; i < spec.num_squares; ++i) {
        Rng comp_rng = rng.fork();
        m.components.push_back(build_component(
            rg, vars, spec.sum_units, spec.input_units,
            cplx ? WeightKind::ComplexPair : WeightKind::RealDirect, spec.input_family, pa,
            comp_rng, "c" + std::to_string(i)));
      }
      m.normalizer = socs_sum(m.components);
      break;
    }
    case ModelClass::MonotoneTimesSocs: {
      const InputFamily mono_fam = monotone_family_for(*vars);
      Circuit mono = build_component(rg, vars, spec.sum_units, spec.input_units,
                                     WeightKind::MonotoneLog, mono_fam, pa, rng, "mono");
      InputFamily sq_fam = spec.input_family;
      if (sq_fam == InputFamily::Categorical) sq_fam = InputFamily::EmbeddingComplex;
      if (sq_fam == InputFamily::EmbeddingReal) sq_fam = InputFamily::EmbeddingComplex;
      std::vector<Circuit> comps;
      for (int i = 0; i < spec.num_squares; ++i) {
        Rng comp_rng = rng.fork();
        comps.push_back(build_component(rg, vars, spec.sum_units, spec.input_units,
                                        WeightKind::ComplexPair, sq_fam, pa, comp_rng,
                                        "c" + std::to_string(i)));
      }
      m.normalizer = monotone_times_socs(mono, socs_sum(comps));
      m.components.push_back(std::move(mono));
      for (auto& c : comps) m.components.push_back(std::move(c));
      break;
    }
  }
  return m;
}

namespace {

std::int64_t leaf_param_count(InputFamily fam, const Domain& d) {
  switch (fam) {
    case InputFamily::Categorical:
      return d.cardinality;
    case InputFamily::Gaussian:
      return 2;
    case InputFamily::EmbeddingReal:
      return d.cardinality;
    case InputFamily::EmbeddingComplex:
      return 2 * d.cardinality;
  }
  return 0;
}

std::int64_t component_param_count(const RegionGraph& rg, const VariableTable& vars, int ks,
                                   int ki, bool complex_weights, InputFamily fam) {
  const std::int64_t wp = complex_weights ? 2 : 1;
  std::int64_t total = 0;
  std::int64_t num_leaves = 0;
  for (std::size_t i = 0; i < rg.size(); ++i) {
    const auto& n = rg.node(i);
    if (n.is_leaf()) {
      ++num_leaves;
      const Domain& d = vars.at(n.scope.min_index()).domain;
      total += ki * leaf_param_count(fam, d);  // leaf functions
      total += std::int64_t(ks) * ki * wp;     // mixing sums
    } else {
      total += std::int64_t(ks) * ks * wp;
    }
  }
  (void)num_leaves;
  total += std::int64_t(ks) * wp;  // output mixture
  return total;
}

}  // namespace

std::int64_t parameter_count(const RegionGraph& rg, const VariableTable& vars,
                             const LayerSpec& spec) {
  switch (spec.model_class) {
    case ModelClass::Monotone:
      return component_param_count(rg, vars, spec.sum_units, spec.input_units, false,
                                   spec.input_family);
    case ModelClass::SquaredReal:
      return component_param_count(rg, vars, spec.sum_units, spec.input_units, false,
                                   spec.input_family);
    case ModelClass::SquaredComplex: {
      InputFamily fam = spec.input_family;
      if (fam == InputFamily::EmbeddingReal) fam = InputFamily::EmbeddingComplex;
      return component_param_count(rg, vars, spec.sum_units, spec.input_units, true, fam);
    }
    case ModelClass::Socs: {
      const bool cplx = spec.input_family == InputFamily::EmbeddingComplex;
      return spec.num_squares * component_param_count(rg, vars, spec.sum_units, spec.input_units,
                                                      cplx, spec.input_family);
    }
    case ModelClass::MonotoneTimesSocs: {
      InputFamily mono_fam = InputFamily::Categorical;
      bool finite = true;
      for (const auto& v : vars.all()) finite = finite && v.domain.is_finite();
      mono_fam = finite ? InputFamily::Categorical : InputFamily::Gaussian;
      InputFamily sq_fam = spec.input_family;
      if (sq_fam == InputFamily::Categorical || sq_fam == InputFamily::EmbeddingReal) {
        sq_fam = InputFamily::EmbeddingComplex;
      }
      return component_param_count(rg, vars, spec.sum_units, spec.input_units, false, mono_fam) +
             spec.num_squares * component_param_count(rg, vars, spec.sum_units, spec.input_units,
                                                      true, sq_fam);
    }
  }
  return 0;
}

}  // namespace socs
