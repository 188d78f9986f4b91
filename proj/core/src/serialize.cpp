#include "socs/serialize.hpp"

#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>

#include "socs/compose.hpp"
#include "socs/errors.hpp"

namespace socs {

using nlohmann::json;

namespace {

json domain_to_json(const Domain& d) {
  switch (d.kind) {
    case Domain::Kind::Boolean:
      return "boolean";
    case Domain::Kind::Finite:
      return json{{"categorical", d.cardinality}};
    case Domain::Kind::Real:
      return "real";
    case Domain::Kind::Interval:
      return json{{"interval", {d.lo, d.hi}}};
  }
  return "boolean";
}

Domain domain_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "boolean") return Domain::boolean();
    if (s == "real") return Domain::real_line();
    throw ConfigError("unknown domain: " + s);
  }
  if (j.contains("categorical")) return Domain::finite(j.at("categorical").get<int>());
  if (j.contains("interval")) {
    return Domain::interval(j.at("interval").at(0).get<double>(),
                            j.at("interval").at(1).get<double>());
  }
  throw ConfigError("unknown domain descriptor");
}

json cplx_to_json(Cplx z) { return json::array({z.real(), z.imag()}); }

Cplx cplx_from_json(const json& j) {
  if (j.is_number()) return Cplx(j.get<double>(), 0.0);
  return Cplx(j.at(0).get<double>(), j.at(1).get<double>());
}

/// Collapses a (possibly composed) leaf to a ground function at the given
/// parameter values, for self-contained serialization.
InputFunction collapse_ground(const InputFunction& f, const Domain& d, const double* theta) {
  if (!std::holds_alternative<ProductOf>(f.fn)) {
    return f;
  }
  switch (f.leaf_class()) {
    case LeafClass::FiniteVector: {
      Embedding e;
      bool any_imag = false;
      for (int v = 0; v < d.cardinality; ++v) {
        const Cplx z = f.eval(d, v, theta);
        e.re.push_back(ParamField::fixed(z.real()));
        e.im.push_back(ParamField::fixed(z.imag()));
        any_imag = any_imag || z.imag() != 0.0;
      }
      if (!any_imag) e.im.clear();
      return InputFunction(e);
    }
    case LeafClass::GaussLike: {
      // accumulate exp(-a x^2 + b x + c) over the factors
      std::function<ExpQuad(const InputFunction&)> acc = [&](const InputFunction& g) -> ExpQuad {
        if (const auto* p = std::get_if<ProductOf>(&g.fn)) {
          const ExpQuad l = acc(*p->lhs), r = acc(*p->rhs);
          return ExpQuad{l.a + r.a, l.b + r.b, l.c + r.c};
        }
        if (const auto* q = std::get_if<ExpQuad>(&g.fn)) return *q;
        const auto& gg = std::get<Gaussian>(g.fn);
        const double mu = gg.mean.get(theta);
        const double ls = gg.log_stddev.get(theta);
        const double lam = std::exp(-2.0 * ls);
        return ExpQuad{0.5 * lam, Cplx(mu * lam, 0.0),
                       Cplx(-0.5 * mu * mu * lam - ls - 0.9189385332046727, 0.0)};
      };
      return InputFunction(acc(f));
    }
    case LeafClass::Poly: {
      // multiply out the coefficient vectors
      std::function<Polynomial(const InputFunction&)> acc =
          [&](const InputFunction& g) -> Polynomial {
        if (const auto* p = std::get_if<ProductOf>(&g.fn)) {
          const Polynomial l = acc(*p->lhs), r = acc(*p->rhs);
          Polynomial out;
          out.coeffs.assign(l.coeffs.size() + r.coeffs.size() - 1, 0.0);
          for (std::size_t i = 0; i < l.coeffs.size(); ++i) {
            for (std::size_t j = 0; j < r.coeffs.size(); ++j) {
              out.coeffs[i + j] += l.coeffs[i] * r.coeffs[j];
            }
          }
          out.has_interval = l.has_interval || r.has_interval;
          out.lo = l.has_interval ? l.lo : r.lo;
          out.hi = l.has_interval ? l.hi : r.hi;
          return out;
        }
        return std::get<Polynomial>(g.fn);
      };
      return InputFunction(acc(f));
    }
    case LeafClass::Constant: {
      return InputFunction(ConstantFn{f.eval(d, 0.0, theta)});
    }
  }
  return f;
}

json function_to_json(const InputFunction& raw, const Domain& d, const double* theta) {
  const InputFunction f = collapse_ground(raw, d, theta);
  return std::visit(
      [&](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Indicator>) {
          return json{{"type", "indicator"}, {"value", v.value}};
        } else if constexpr (std::is_same_v<T, Categorical>) {
          json probs = json::array();
          for (const auto& p : v.probs) probs.push_back(p.get(theta));
          return json{{"type", "categorical"}, {"probabilities", probs}};
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return json{{"type", "gaussian"},
                      {"mean", v.mean.get(theta)},
                      {"log_stddev", v.log_stddev.get(theta)}};
        } else if constexpr (std::is_same_v<T, Embedding>) {
          json entries = json::array();
          const double sign = v.conjugated ? -1.0 : 1.0;
          for (std::size_t i = 0; i < v.re.size(); ++i) {
            entries.push_back(cplx_to_json(
                Cplx(v.re[i].get(theta), v.im.empty() ? 0.0 : sign * v.im[i].get(theta))));
          }
          return json{{"type", "embedding"}, {"entries", entries}};
        } else if constexpr (std::is_same_v<T, Polynomial>) {
          json out{{"type", "polynomial"}, {"coefficients", v.coeffs}};
          if (v.has_interval) out["interval"] = {v.lo, v.hi};
          return out;
        } else if constexpr (std::is_same_v<T, ConstantFn>) {
          return json{{"type", "constant"}, {"value", cplx_to_json(v.value)}};
        } else if constexpr (std::is_same_v<T, ExpQuad>) {
          return json{{"type", "exp_quad"},
                      {"a", v.a},
                      {"b", cplx_to_json(v.b)},
                      {"c", cplx_to_json(v.c)}};
        } else {
          throw ConfigError("unserializable leaf function");
        }
      },
      f.fn);
}

InputFunction function_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "indicator") return InputFunction(Indicator{j.at("value").get<int>()});
  if (type == "categorical") {
    Categorical c;
    for (const auto& p : j.at("probabilities")) {
      const double v = p.get<double>();
      if (v < 0.0) throw ConfigError("categorical probabilities must be nonnegative");
      c.probs.push_back(ParamField::fixed(v));
    }
    return InputFunction(c);
  }
  if (type == "gaussian") {
    Gaussian g;
    g.mean = ParamField::fixed(j.at("mean").get<double>());
    g.log_stddev = ParamField::fixed(j.at("log_stddev").get<double>());
    return InputFunction(g);
  }
  if (type == "embedding") {
    Embedding e;
    bool any_imag = false;
    for (const auto& entry : j.at("entries")) {
      const Cplx z = cplx_from_json(entry);
      e.re.push_back(ParamField::fixed(z.real()));
      e.im.push_back(ParamField::fixed(z.imag()));
      any_imag = any_imag || z.imag() != 0.0;
    }
    if (!any_imag) e.im.clear();
    return InputFunction(e);
  }
  if (type == "polynomial") {
    Polynomial p;
    p.coeffs = j.at("coefficients").get<std::vector<double>>();
    if (j.contains("interval")) {
      p.has_interval = true;
      p.lo = j.at("interval").at(0).get<double>();
      p.hi = j.at("interval").at(1).get<double>();
    }
    return InputFunction(p);
  }
  if (type == "constant") return InputFunction(ConstantFn{cplx_from_json(j.at("value"))});
  if (type == "exp_quad") {
    return InputFunction(
        ExpQuad{j.at("a").get<double>(), cplx_from_json(j.at("b")), cplx_from_json(j.at("c"))});
  }
  throw ConfigError("unknown leaf function type: " + type);
}

json circuit_to_json_obj(const Circuit& c, const double* theta = nullptr) {
  if (c.field() == Field::Hypercomplex) {
    throw ConfigError("hypercomplex circuits are not serializable");
  }
  json vars = json::array();
  for (const auto& v : c.var_table()->all()) {
    vars.push_back(json{{"name", v.name}, {"domain", domain_to_json(v.domain)}});
  }
  json units = json::array();
  for (UnitId id = 0; id < static_cast<UnitId>(c.num_units()); ++id) {
    const Unit& u = c.unit(id);
    json ju{{"id", id}};
    switch (u.kind) {
      case UnitKind::Input:
        ju["kind"] = "input";
        if (u.var >= 0) ju["variable"] = u.var;
        ju["function"] = function_to_json(
            *u.fn, u.var >= 0 ? c.var_table()->at(u.var).domain : Domain::boolean(), theta);
        break;
      case UnitKind::Sum: {
        ju["kind"] = "sum";
        ju["inputs"] = u.inputs;
        json ws = json::array();
        for (const auto& w : u.weights) ws.push_back(cplx_to_json(w.value(theta)));
        ju["weights"] = ws;
        break;
      }
      case UnitKind::Product:
        ju["kind"] = "product";
        ju["inputs"] = u.inputs;
        break;
    }
    units.push_back(std::move(ju));
  }
  return json{{"field", c.field() == Field::Complex ? "complex" : "real"},
              {"variables", vars},
              {"units", units},
              {"output", c.output()}};
}

Circuit circuit_from_json_obj(const json& j) {
  const std::string field_s = j.at("field").get<std::string>();
  Field field;
  if (field_s == "real") {
    field = Field::Real;
  } else if (field_s == "complex") {
    field = Field::Complex;
  } else {
    throw ConfigError("unknown field: " + field_s);
  }
  std::vector<Variable> vars;
  for (const auto& jv : j.at("variables")) {
    vars.push_back({jv.at("name").get<std::string>(), domain_from_json(jv.at("domain"))});
  }
  auto table = std::make_shared<VariableTable>(std::move(vars));
  CircuitBuilder b(table, field);
  std::vector<UnitId> remap;
  for (const auto& ju : j.at("units")) {
    const int id = ju.at("id").get<int>();
    if (id != static_cast<int>(remap.size())) {
      throw ConfigError("unit ids must be dense and ascending");
    }
    const std::string kind = ju.at("kind").get<std::string>();
    if (kind == "input") {
      const int var = ju.contains("variable") ? ju.at("variable").get<int>() : -1;
      remap.push_back(b.add_input(var, function_from_json(ju.at("function"))));
    } else if (kind == "sum") {
      std::vector<UnitId> ins;
      for (const auto& i : ju.at("inputs")) ins.push_back(remap.at(i.get<int>()));
      std::vector<WeightExpr> ws;
      for (const auto& w : ju.at("weights")) {
        const Cplx z = cplx_from_json(w);
        if (field == Field::Real && z.imag() != 0.0) {
          throw ConfigError("complex weight in a real circuit");
        }
        ws.push_back(WeightExpr::lit(z));
      }
      remap.push_back(b.add_sum(std::move(ins), std::move(ws)));
    } else if (kind == "product") {
      std::vector<UnitId> ins;
      for (const auto& i : ju.at("inputs")) ins.push_back(remap.at(i.get<int>()));
      remap.push_back(b.add_product(ins));
    } else {
      throw ConfigError("unknown unit kind: " + kind);
    }
  }
  return b.build(remap.at(j.at("output").get<int>()));
}

/// Rebuilds a circuit over a shared variable-table instance (tables must
/// agree entry-wise); compatibility checks compare table identity.
Circuit rebind_table(const Circuit& c, const VariableTablePtr& table) {
  if (c.var_table() == table) return c;
  if (c.var_table()->size() != table->size()) {
    throw ConfigError("circuits disagree on the variable table");
  }
  for (int v = 0; v < table->size(); ++v) {
    if (c.var_table()->at(v).name != table->at(v).name ||
        !(c.var_table()->at(v).domain == table->at(v).domain)) {
      throw ConfigError("circuits disagree on variable " + table->at(v).name);
    }
  }
  CircuitBuilder b(table, c.field(), c.hyper_order());
  std::vector<UnitId> remap(c.num_units());
  for (UnitId id : c.topo_order()) {
    const Unit& u = c.unit(id);
    switch (u.kind) {
      case UnitKind::Input:
        remap[id] = b.add_input(u.var, u.fn);
        break;
      case UnitKind::Sum: {
        std::vector<UnitId> ins;
        for (UnitId cc : u.inputs) ins.push_back(remap[cc]);
        remap[id] = b.add_sum(std::move(ins), u.weights);
        break;
      }
      case UnitKind::Product:
        remap[id] = b.add_product({remap[u.inputs[0]], remap[u.inputs[1]]});
        break;
    }
  }
  return b.build(remap[c.output()]);
}

}  // namespace

std::string circuit_to_json(const Circuit& c) { return circuit_to_json_obj(c).dump(2) + "\n"; }

Circuit circuit_from_json(const std::string& text) {
  return circuit_from_json_obj(json::parse(text));
}

std::string model_to_json(const Model& m) {
  json j;
  j["format_version"] = 1;
  j["model_class"] = to_string(m.cls);
  j["input_family"] = to_string(m.spec.input_family);
  j["num_squares"] = m.spec.num_squares;
  j["sum_units"] = m.spec.sum_units;
  j["input_units"] = m.spec.input_units;
  json comps = json::array();
  for (const auto& c : m.components) comps.push_back(circuit_to_json_obj(c, m.theta()));
  j["components"] = comps;
  return j.dump(2) + "\n";
}

Model model_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.contains("format_version") || j.at("format_version").get<int>() != 1) {
    throw ConfigError("unsupported model format_version");
  }
  Model m;
  m.cls = model_class_from_string(j.at("model_class").get<std::string>());
  m.spec.model_class = m.cls;
  m.spec.input_family = input_family_from_string(j.at("input_family").get<std::string>());
  m.spec.num_squares = j.value("num_squares", 1);
  m.spec.sum_units = j.value("sum_units", 1);
  m.spec.input_units = j.value("input_units", 1);
  for (const auto& jc : j.at("components")) {
    Circuit c = circuit_from_json_obj(jc);
    // components from one model file share a variable-table instance
    if (m.components.empty()) {
      m.components.push_back(std::move(c));
    } else {
      m.components.push_back(rebind_table(c, m.components[0].var_table()));
    }
  }
  if (m.components.empty()) throw ConfigError("model has no components");
  m.vars = m.components[0].var_table();
  switch (m.cls) {
    case ModelClass::Monotone:
      m.normalizer = m.components[0];
      break;
    case ModelClass::SquaredReal:
    case ModelClass::SquaredComplex:
      m.normalizer = square(m.components[0]);
      break;
    case ModelClass::Socs:
      m.normalizer = socs_sum(m.components);
      break;
    case ModelClass::MonotoneTimesSocs: {
      std::vector<Circuit> rest(m.components.begin() + 1, m.components.end());
      m.normalizer = monotone_times_socs(m.components[0], socs_sum(rest));
      break;
    }
  }
  return m;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << text;
  if (!out) throw ConfigError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MPS mps_from_json(const std::string& text) {
  const json j = json::parse(text);
  MPS m;
  const std::string f = j.value("field", "real");
  if (f == "real") {
    m.field = Field::Real;
  } else if (f == "complex") {
    m.field = Field::Complex;
  } else {
    throw ConfigError("unknown field: " + f);
  }
  m.d = j.at("d").get<int>();
  m.v = j.at("v").get<int>();
  m.r = j.at("r").get<int>();
  const bool complex_entries = m.field == Field::Complex;
  for (const auto& jt : j.at("tensors")) {
    std::vector<Cplx> t;
    // row-major nested arrays; complex entries are [re, im] pairs
    std::function<void(const json&)> walk = [&](const json& node) {
      if (complex_entries && node.is_array() && node.size() == 2 && node[0].is_number() &&
          node[1].is_number()) {
        t.push_back(cplx_from_json(node));
      } else if (node.is_number()) {
        t.push_back(Cplx(node.get<double>(), 0.0));
      } else if (node.is_array()) {
        for (const auto& sub : node) walk(sub);
      } else {
        throw ConfigError("malformed tensor entry");
      }
    };
    walk(jt);
    m.tensors.push_back(std::move(t));
  }
  m.validate();
  return m;
}

std::string mps_to_json(const MPS& m) {
  json j;
  j["field"] = m.field == Field::Complex ? "complex" : "real";
  j["d"] = m.d;
  j["v"] = m.v;
  j["r"] = m.r;
  json ts = json::array();
  for (const auto& t : m.tensors) {
    json jt = json::array();
    for (const Cplx& z : t) jt.push_back(cplx_to_json(z));
    ts.push_back(std::move(jt));
  }
  j["tensors"] = ts;
  return j.dump(2) + "\n";
}

GraphSpec graph_from_json(const std::string& text) {
  const json j = json::parse(text);
  GraphSpec g;
  g.vertices = j.at("vertices").get<int>();
  for (const auto& je : j.at("edges")) {
    g.edges.push_back({je.at(0).get<int>(), je.at(1).get<int>()});
  }
  g.validate();
  return g;
}

PSDModel psd_from_json(const std::string& text) {
  const json j = json::parse(text);
  PSDModel p;
  p.matrix = j.at("matrix").get<std::vector<std::vector<double>>>();
  for (const auto& jc : j.at("components")) {
    Circuit c = circuit_from_json_obj(jc);
    if (p.components.empty()) {
      p.components.push_back(std::move(c));
    } else {
      p.components.push_back(rebind_table(c, p.components[0].var_table()));
    }
  }
  if (p.components.empty()) throw ConfigError("PSD model needs components");
  return p;
}

SnefySpec snefy_from_json(const std::string& text) {
  const json j = json::parse(text);
  SnefySpec s;
  const std::string sig = j.at("sigma").get<std::string>();
  if (sig == "exp") {
    s.sigma = SnefySpec::Sigma::Exp;
  } else if (sig == "cos") {
    s.sigma = SnefySpec::Sigma::Cos;
  } else {
    throw ConfigError("sigma must be exp or cos");
  }
  s.V = j.at("V").get<std::vector<std::vector<double>>>();
  s.W = j.at("W").get<std::vector<std::vector<double>>>();
  s.b = j.at("b").get<std::vector<double>>();
  for (const auto& jv : j.at("variables")) {
    SnefySpec::Var v;
    if (jv.contains("cardinality")) {
      v.finite = true;
      v.cardinality = jv.at("cardinality").get<int>();
      v.mu_weights = jv.at("mu").get<std::vector<double>>();
      v.t = jv.at("t").get<std::vector<std::vector<double>>>();
    } else {
      v.finite = false;
      v.mu_mean = jv.at("mu").at("mean").get<double>();
      v.mu_stddev = jv.at("mu").at("stddev").get<double>();
    }
    s.vars.push_back(std::move(v));
  }
  s.validate();
  return s;
}

std::vector<std::string> csv_column_names(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("empty CSV: " + path);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  std::vector<std::string> names;
  std::stringstream ss(header);
  std::string cell;
  while (std::getline(ss, cell, ',')) names.push_back(cell);
  return names;
}

Dataset dataset_from_csv(const std::string& path, const VariableTable& vars) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty CSV: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  // column index of each variable, bound by name
  std::vector<int> col_of(vars.size(), -1);
  for (int v = 0; v < vars.size(); ++v) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      if (names[c] == vars.at(v).name) {
        col_of[v] = static_cast<int>(c);
        break;
      }
    }
    if (col_of[v] < 0) throw ConfigError("CSV is missing column " + vars.at(v).name);
  }

  Dataset d;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        cells.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("non-numeric CSV cell at line " + std::to_string(line_no));
      }
    }
    if (cells.size() != names.size()) {
      throw ConfigError("CSV row width mismatch at line " + std::to_string(line_no));
    }
    Assignment row(vars.size());
    for (int v = 0; v < vars.size(); ++v) row[v] = cells[col_of[v]];
    d.rows.push_back(std::move(row));
  }
  d.validate(vars);
  return d;
}

}  // namespace socs
