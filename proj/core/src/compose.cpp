#include "socs/compose.hpp"

#include <array>
#include <sstream>
#include <unordered_map>

#include "socs/errors.hpp"
#include "socs/reductions.hpp"
#include "socs/structure.hpp"

namespace socs {

namespace {

std::string scope_string(const Circuit& c, const Scope& s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (int v : s.to_vector()) {
    os << (first ? "" : ",") << c.var_table()->at(v).name;
    first = false;
  }
  os << "}";
  return os.str();
}

/// Copies a built circuit into a builder, transforming weights and leaf
/// functions. Returns the remapped output id.
template <typename WeightFn, typename LeafFn>
UnitId copy_transformed(CircuitBuilder& b, const Circuit& src, WeightFn&& wf, LeafFn&& lf) {
  std::vector<UnitId> remap(src.num_units());
  for (UnitId id : src.topo_order()) {
    const Unit& u = src.unit(id);
    switch (u.kind) {
      case UnitKind::Input:
        remap[id] = lf(b, u);
        break;
      case UnitKind::Sum: {
        std::vector<UnitId> ins;
        ins.reserve(u.inputs.size());
        for (UnitId c : u.inputs) ins.push_back(remap[c]);
        if (!u.hyper_weights.empty()) {
          remap[id] = b.add_sum_hyper(std::move(ins), u.hyper_weights, u.weight_on_right);
        } else {
          std::vector<WeightExpr> ws;
          ws.reserve(u.weights.size());
          for (const auto& w : u.weights) ws.push_back(wf(w));
          remap[id] = b.add_sum(std::move(ins), std::move(ws));
        }
        break;
      }
      case UnitKind::Product:
        remap[id] = b.add_product({remap[u.inputs[0]], remap[u.inputs[1]]});
        break;
    }
  }
  return remap[src.output()];
}

class Multiplier {
public:
  Multiplier(const Circuit& c1, const Circuit& c2, bool use_cache)
      : c1_(c1),
        c2_(c2),
        use_cache_(use_cache),
        out_(c1.var_table(),
             (c1.field() == Field::Complex || c2.field() == Field::Complex) ? Field::Complex
                                                                            : Field::Real) {}

  Circuit run() {
    if (c1_.field() == Field::Hypercomplex || c2_.field() == Field::Hypercomplex) {
      throw FieldError("multiply over hypercomplex algebras goes through the real decomposition");
    }
    const CompatReport rep = check_compatible(c1_, c2_);
    if (!rep.compatible) {
      const auto [a, b] = rep.witnesses.front();
      throw IncompatibleError("incompatible circuits: unit scopes " +
                              scope_string(c1_, c1_.unit(a).scope) + " vs " +
                              scope_string(c2_, c2_.unit(b).scope));
    }
    const UnitId root = mult(c1_.output(), c2_.output());
    if (c1_.region_graph() != nullptr && c1_.region_graph() == c2_.region_graph()) {
      out_.set_region_graph(c1_.region_graph());
    }
    return out_.build(root);
  }

private:
  UnitId import_from(const Circuit& src, UnitId id, std::unordered_map<UnitId, UnitId>& memo) {
    auto it = memo.find(id);
    if (it != memo.end()) return it->second;
    const Unit& u = src.unit(id);
    UnitId res;
    switch (u.kind) {
      case UnitKind::Input:
        res = out_.add_input(u.var, u.fn);
        break;
      case UnitKind::Sum: {
        std::vector<UnitId> ins;
        ins.reserve(u.inputs.size());
        for (UnitId c : u.inputs) ins.push_back(import_from(src, c, memo));
        res = out_.add_sum(std::move(ins), u.weights);
        break;
      }
      case UnitKind::Product:
        res = out_.add_product(
            {import_from(src, u.inputs[0], memo), import_from(src, u.inputs[1], memo)});
        break;
    }
    memo.emplace(id, res);
    return res;
  }

  UnitId import1(UnitId id) { return import_from(c1_, id, memo1_); }
  UnitId import2(UnitId id) { return import_from(c2_, id, memo2_); }

  UnitId mult(UnitId a, UnitId b) {
    const std::uint64_t key = (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b);
    if (use_cache_) {
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    const Unit& A = c1_.unit(a);
    const Unit& B = c2_.unit(b);
    UnitId m;

    if (A.scope.disjoint(B.scope)) {
      m = out_.add_product_canonical({import1(a), import2(b)});
    } else if (A.kind == UnitKind::Input && B.kind == UnitKind::Input) {
      // same (singleton) scope: merge into one leaf over that variable
      m = out_.add_input(A.var, make_leaf_product(A.fn, B.fn));
    } else if (A.kind == UnitKind::Sum && B.kind == UnitKind::Sum) {
      std::vector<UnitId> ins;
      std::vector<WeightExpr> ws;
      ins.reserve(A.inputs.size() * B.inputs.size());
      for (int i = 0; i < A.fan_in(); ++i) {
        for (int j = 0; j < B.fan_in(); ++j) {
          ins.push_back(mult(A.inputs[i], B.inputs[j]));
          ws.push_back(WeightExpr::mul(A.weights[i], B.weights[j]));
        }
      }
      m = out_.add_sum(std::move(ins), std::move(ws));
    } else if (A.kind == UnitKind::Sum) {
      std::vector<UnitId> ins;
      ins.reserve(A.inputs.size());
      for (UnitId c : A.inputs) ins.push_back(mult(c, b));
      m = out_.add_sum(std::move(ins), A.weights);
    } else if (B.kind == UnitKind::Sum) {
      std::vector<UnitId> ins;
      ins.reserve(B.inputs.size());
      for (UnitId c : B.inputs) ins.push_back(mult(a, c));
      m = out_.add_sum(std::move(ins), B.weights);
    } else if (A.kind == UnitKind::Product && B.kind == UnitKind::Product) {
      m = mult_products(a, b);
    } else if (A.kind == UnitKind::Input && B.kind == UnitKind::Product) {
      m = mult_into_product(a, b, /*input_on_left=*/true);
    } else {  // A product, B input
      m = mult_into_product(b, a, /*input_on_left=*/false);
    }

    if (use_cache_) cache_.emplace(key, m);
    return m;
  }

  /// Pairs the two children of each product by scope overlap; children only
  /// present on one side pass through unchanged.
  UnitId mult_products(UnitId a, UnitId b) {
    const Unit& A = c1_.unit(a);
    const Unit& B = c2_.unit(b);
    std::array<int, 2> match{-1, -1};
    std::array<bool, 2> b_used{false, false};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        if (!c1_.unit(A.inputs[i]).scope.disjoint(c2_.unit(B.inputs[j]).scope)) {
          if (match[i] != -1 || (match[1 - i] == j)) {
            throw IncompatibleError("product units decompose their shared scope differently: " +
                                    scope_string(c1_, A.scope) + " vs " +
                                    scope_string(c2_, B.scope));
          }
          match[i] = j;
          b_used[j] = true;
        }
      }
    }
    std::vector<UnitId> parts;
    for (int i = 0; i < 2; ++i) {
      if (match[i] >= 0) {
        parts.push_back(mult(A.inputs[i], B.inputs[match[i]]));
      } else {
        parts.push_back(import1(A.inputs[i]));
      }
    }
    for (int j = 0; j < 2; ++j) {
      if (!b_used[j]) parts.push_back(import2(B.inputs[j]));
    }
    return out_.add_product_canonical(std::move(parts));
  }

  /// Input unit times a product with overlapping scope: multiply into the
  /// child whose scope contains the input's variable.
  UnitId mult_into_product(UnitId input_id, UnitId prod_id, bool input_on_left) {
    const Circuit& ci = input_on_left ? c1_ : c2_;
    const Circuit& cp = input_on_left ? c2_ : c1_;
    const Unit& P = cp.unit(prod_id);
    const int var = ci.unit(input_id).var;
    std::vector<UnitId> parts;
    for (int j = 0; j < 2; ++j) {
      const UnitId child = P.inputs[j];
      if (cp.unit(child).scope.contains(var)) {
        parts.push_back(input_on_left ? mult(input_id, child) : mult(child, input_id));
      } else {
        auto& memo = input_on_left ? memo2_ : memo1_;
        parts.push_back(import_from(cp, child, memo));
      }
    }
    return out_.add_product_canonical(std::move(parts));
  }

  const Circuit& c1_;
  const Circuit& c2_;
  bool use_cache_;
  CircuitBuilder out_;
  std::unordered_map<std::uint64_t, UnitId> cache_;
  std::unordered_map<UnitId, UnitId> memo1_, memo2_;
};

}  // namespace

Circuit multiply(const Circuit& c1, const Circuit& c2, bool use_cache) {
  return Multiplier(c1, c2, use_cache).run();
}

Circuit conjugate(const Circuit& c) {
  if (c.field() == Field::Hypercomplex) {
    throw FieldError("conjugation of hypercomplex circuits goes through the real decomposition");
  }
  if (c.field() == Field::Real) return c;
  CircuitBuilder b(c.var_table(), c.field());
  b.set_region_graph(c.region_graph());
  const UnitId root = copy_transformed(
      b, c, [](const WeightExpr& w) { return WeightExpr::conj(w); },
      [](CircuitBuilder& bb, const Unit& u) {
        return bb.add_input(u.var, std::make_shared<InputFunction>(u.fn->conjugate()));
      });
  return b.build(root);
}

Circuit square(const Circuit& c) {
  switch (c.field()) {
    case Field::Real:
      return multiply(c, c);
    case Field::Complex:
      return multiply(conjugate(c), c);
    case Field::Hypercomplex: {
      auto parts = hypercomplex_decompose(c);
      return socs_sum(parts);
    }
  }
  throw Error("unreachable field");
}

Circuit socs_sum(const std::vector<Circuit>& cs, std::vector<double> coefficients) {
  if (cs.empty()) throw ConfigError("sum of squares needs at least one component");
  if (coefficients.empty()) coefficients.assign(cs.size(), 1.0);
  if (coefficients.size() != cs.size()) {
    throw ConfigError("coefficient count does not match component count");
  }
  for (double l : coefficients) {
    if (l < 0.0) throw ConfigError("sum-of-squares coefficients must be nonnegative");
  }
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].scope() != cs[0].scope()) {
      throw StructureError("sum-of-squares components must share one scope");
    }
    for (std::size_t j = i; j < cs.size(); ++j) {
      if (!check_compatible(cs[i], cs[j]).compatible) {
        throw IncompatibleError("components " + std::to_string(i) + " and " + std::to_string(j) +
                                " are not compatible");
      }
    }
  }

  Field field = Field::Real;
  for (const auto& c : cs) {
    if (c.field() == Field::Complex || c.field() == Field::Hypercomplex) field = Field::Complex;
  }
  CircuitBuilder b(cs[0].var_table(), field);
  std::vector<UnitId> roots;
  std::vector<WeightExpr> ws;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Circuit sq = square(cs[i]);
    roots.push_back(copy_transformed(
        b, sq, [](const WeightExpr& w) { return w; },
        [](CircuitBuilder& bb, const Unit& u) { return bb.add_input(u.var, u.fn); }));
    ws.push_back(WeightExpr::lit(coefficients[i]));
  }
  const UnitId root = b.add_sum(std::move(roots), std::move(ws));
  bool same_rg = cs[0].region_graph() != nullptr;
  for (const auto& c : cs) same_rg = same_rg && c.region_graph() == cs[0].region_graph();
  if (same_rg) b.set_region_graph(cs[0].region_graph());
  Circuit out = b.build(root);
  auto info = std::make_shared<SocsStructure>();
  info->components = cs;
  info->coefficients = std::move(coefficients);
  out.attach_socs_structure(std::move(info));
  return out;
}

Circuit monotone_times_socs(const Circuit& mono, const Circuit& socs) {
  if (!check_monotone(mono)) {
    throw MonotonicityError("left factor of a monotone-times-SOCS product must be monotone");
  }
  Circuit out = multiply(mono, socs);
  auto info = std::make_shared<MuSocsStructure>();
  info->monotone = mono;
  info->socs = socs;
  out.attach_musocs_structure(std::move(info));
  return out;
}

LogComplex split_log_value(const Circuit& musocs, const Assignment& x, const double* theta) {
  const auto& info = musocs.musocs_structure();
  if (info == nullptr) {
    throw ConfigError("circuit does not carry a monotone-times-SOCS record");
  }
  const LogComplex mono_log = evaluate_log(info->monotone, x, theta);
  LogComplex socs_log;
  if (const auto& s = info->socs.socs_structure()) {
    std::vector<std::pair<Cplx, LogComplex>> terms;
    terms.reserve(s->components.size());
    for (std::size_t i = 0; i < s->components.size(); ++i) {
      const LogComplex li = evaluate_log(s->components[i], x, theta);
      terms.emplace_back(Cplx(s->coefficients[i], 0.0),
                         li.is_zero() ? LogComplex::zero()
                                      : LogComplex{2.0 * li.log_mag, 0.0});
    }
    socs_log = logsumexp_complex(terms);
  } else {
    socs_log = evaluate_log(info->socs, x, theta);
  }
  return log_mul(mono_log, socs_log);
}

Circuit condition(const Circuit& c, const Scope& assigned, const Assignment& values,
                  const double* theta) {
  const auto rep = check_smooth_decomposable(c);
  if (!rep.ok()) throw StructureError("conditioning requires a smooth and decomposable circuit");
  for (int v : assigned.to_vector()) c.var_table()->check_value(v, values[v]);

  CircuitBuilder b(c.var_table(), c.field(), c.hyper_order());
  const UnitId root = copy_transformed(
      b, c, [](const WeightExpr& w) { return w; },
      [&](CircuitBuilder& bb, const Unit& u) {
        if (u.var >= 0 && assigned.contains(u.var)) {
          const Cplx v = u.fn->eval(c.var_table()->at(u.var).domain, values[u.var], theta);
          return bb.add_constant(v);
        }
        return bb.add_input(u.var, u.fn);
      });
  Circuit out = b.build(root);
  if (const auto& s = c.socs_structure()) {
    auto info = std::make_shared<SocsStructure>();
    for (const auto& comp : s->components) {
      info->components.push_back(condition(comp, assigned, values, theta));
    }
    info->coefficients = s->coefficients;
    out.attach_socs_structure(std::move(info));
  }
  return out;
}

UnitId add_constant_one(CircuitBuilder& b, const Scope& scope) {
  std::vector<UnitId> per_var;
  for (int v : scope.to_vector()) {
    const Domain& d = b.var_table()->at(v).domain;
    if (!d.is_finite()) {
      throw ConfigError("constant-one gadget requires finite-domain variables");
    }
    std::vector<UnitId> ind;
    std::vector<WeightExpr> ws;
    for (int k = 0; k < d.cardinality; ++k) {
      ind.push_back(b.add_input(v, InputFunction(Indicator{k})));
      ws.push_back(WeightExpr::lit(1.0));
    }
    per_var.push_back(b.add_sum(std::move(ind), std::move(ws)));
  }
  if (per_var.empty()) return b.add_constant(Cplx(1.0, 0.0));
  return b.add_product_canonical(std::move(per_var));
}

Circuit constant_one(const VariableTablePtr& vars, const Scope& scope, Field field) {
  CircuitBuilder b(vars, field);
  return b.build(add_constant_one(b, scope));
}

}  // namespace socs
