#include "socs/structure.hpp"

#include <algorithm>
#include <unordered_map>

#include "socs/errors.hpp"

namespace socs {

namespace {

/// Child scopes of a product in canonical comparison order: ascending by
/// smallest member index, empty scopes last.
std::pair<Scope, Scope> canonical_split(const Circuit& c, const Unit& u) {
  Scope a = c.unit(u.inputs[0]).scope;
  Scope b = c.unit(u.inputs[1]).scope;
  if (a.min_index() > b.min_index()) std::swap(a, b);
  return {a, b};
}

struct ScopeGroups {
  // scope -> unit ids, separately for products and leaves
  std::unordered_map<Scope, std::vector<UnitId>, Scope::Hash> products;
  std::unordered_map<int, std::vector<UnitId>> leaves;  // by variable
};

ScopeGroups group_by_scope(const Circuit& c) {
  ScopeGroups g;
  for (UnitId id : c.topo_order()) {
    const Unit& u = c.unit(id);
    if (u.kind == UnitKind::Product) {
      g.products[u.scope].push_back(id);
    } else if (u.kind == UnitKind::Input && u.var >= 0) {
      g.leaves[u.var].push_back(id);
    }
  }
  return g;
}

}  // namespace

StructuralReport check_smooth_decomposable(const Circuit& c) {
  StructuralReport r;
  for (UnitId id : c.topo_order()) {
    const Unit& u = c.unit(id);
    if (u.kind == UnitKind::Sum) {
      const Scope& first = c.unit(u.inputs[0]).scope;
      for (UnitId in : u.inputs) {
        if (c.unit(in).scope != first) {
          r.smooth = false;
          r.smoothness_witnesses.push_back(id);
          break;
        }
      }
    } else if (u.kind == UnitKind::Product) {
      if (!c.unit(u.inputs[0]).scope.disjoint(c.unit(u.inputs[1]).scope)) {
        r.decomposable = false;
        r.decomposability_witnesses.push_back(id);
      }
    }
  }
  return r;
}

CompatReport check_compatible(const Circuit& c1, const Circuit& c2) {
  if (c1.var_table() != c2.var_table()) {
    throw StructureError("compatibility requires circuits over the same variable table");
  }
  if (!check_smooth_decomposable(c1).ok() || !check_smooth_decomposable(c2).ok()) {
    throw StructureError("compatibility is defined for smooth and decomposable circuits");
  }

  CompatReport r;
  const ScopeGroups g1 = group_by_scope(c1);
  const ScopeGroups g2 = group_by_scope(c2);

  // Condition (i): same-scope leaf pairs must have a closed-form product.
  for (const auto& [var, ids1] : g1.leaves) {
    auto it = g2.leaves.find(var);
    if (it == g2.leaves.end()) continue;
    for (UnitId a : ids1) {
      for (UnitId b : it->second) {
        if (!product_integrable(*c1.unit(a).fn, *c2.unit(b).fn)) {
          r.compatible = false;
          r.witnesses.emplace_back(a, b);
        }
      }
    }
  }

  // Condition (ii): same-scope product pairs must decompose identically.
  for (const auto& [scope, ids1] : g1.products) {
    auto it = g2.products.find(scope);
    if (it == g2.products.end()) continue;
    for (UnitId a : ids1) {
      const auto sa = canonical_split(c1, c1.unit(a));
      for (UnitId b : it->second) {
        const auto sb = canonical_split(c2, c2.unit(b));
        if (sa.first != sb.first || sa.second != sb.second) {
          r.compatible = false;
          r.witnesses.emplace_back(a, b);
        }
      }
    }
  }
  return r;
}

bool structured_decomposable(const Circuit& c) {
  return check_compatible(c, c).compatible;
}

bool check_monotone(const Circuit& c) {
  if (c.field() != Field::Real) {
    throw FieldError("monotonicity is defined for circuits over the real field");
  }
  const int cached = c.monotone_cache();
  if (cached >= 0) return cached == 1;

  bool mono = true;
  for (UnitId id : c.topo_order()) {
    const Unit& u = c.unit(id);
    if (u.kind == UnitKind::Sum) {
      for (const auto& w : u.weights) {
        const Cplx v = w.value(nullptr);
        if (v.imag() != 0.0 || v.real() < 0.0) {
          mono = false;
          break;
        }
      }
    } else if (u.kind == UnitKind::Input) {
      if (!u.fn->is_nonnegative(nullptr)) mono = false;
    }
    if (!mono) break;
  }
  c.set_monotone_cache(mono ? 1 : 0);
  return mono;
}

}  // namespace socs
