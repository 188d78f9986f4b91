#include "socs/circuit.hpp"

#include <algorithm>

#include "socs/errors.hpp"

namespace socs {

WeightExpr WeightExpr::mul(WeightExpr x, WeightExpr y) {
  if (x.is_literal() && y.is_literal()) return lit(x.literal * y.literal);
  WeightExpr w;
  w.kind = Kind::Mul;
  w.literal = x.literal * y.literal;
  w.a = std::make_shared<WeightExpr>(std::move(x));
  w.b = std::make_shared<WeightExpr>(std::move(y));
  return w;
}

WeightExpr WeightExpr::conj(WeightExpr x) {
  switch (x.kind) {
    case Kind::Literal:
      return lit(std::conj(x.literal));
    case Kind::Slot:
    case Kind::SlotExp:
      return x;  // real-valued
    default: {
      WeightExpr w;
      w.kind = Kind::Conj;
      w.literal = std::conj(x.literal);
      w.a = std::make_shared<WeightExpr>(std::move(x));
      return w;
    }
  }
}

Cplx WeightExpr::value(const double* theta) const {
  switch (kind) {
    case Kind::Literal:
      return literal;
    case Kind::Slot:
      return theta ? Cplx(theta[slot], 0.0) : literal;
    case Kind::SlotExp:
      return theta ? Cplx(std::exp(theta[slot]), 0.0) : literal;
    case Kind::ComplexSlots:
      return theta ? Cplx(theta[slot], theta[slot2]) : literal;
    case Kind::Mul:
      return a->value(theta) * b->value(theta);
    case Kind::Conj:
      return std::conj(a->value(theta));
  }
  return literal;
}

void WeightExpr::backprop(Cplx adjoint, const double* theta, double* grad) const {
  switch (kind) {
    case Kind::Literal:
      return;
    case Kind::Slot:
      grad[slot] += adjoint.real();
      return;
    case Kind::SlotExp:
      grad[slot] += adjoint.real() * value(theta).real();
      return;
    case Kind::ComplexSlots:
      grad[slot] += adjoint.real();
      grad[slot2] += adjoint.imag();
      return;
    case Kind::Mul:
      a->backprop(std::conj(b->value(theta)) * adjoint, theta, grad);
      b->backprop(std::conj(a->value(theta)) * adjoint, theta, grad);
      return;
    case Kind::Conj:
      a->backprop(std::conj(adjoint), theta, grad);
      return;
  }
}

bool WeightExpr::has_slots() const {
  switch (kind) {
    case Kind::Literal:
      return false;
    case Kind::Slot:
    case Kind::SlotExp:
    case Kind::ComplexSlots:
      return true;
    case Kind::Mul:
      return a->has_slots() || b->has_slots();
    case Kind::Conj:
      return a->has_slots();
  }
  return false;
}

Circuit& Circuit::operator=(const Circuit& o) {
  if (this == &o) return *this;
  vars_ = o.vars_;
  units_ = o.units_;
  output_ = o.output_;
  topo_ = o.topo_;
  field_ = o.field_;
  hyper_order_ = o.hyper_order_;
  rg_ = o.rg_;
  socs_ = o.socs_;
  musocs_ = o.musocs_;
  monotone_cache_.store(o.monotone_cache_.load(std::memory_order_relaxed),
                        std::memory_order_relaxed);
  return *this;
}

std::int64_t Circuit::num_edges() const {
  std::int64_t n = 0;
  for (const auto& u : units_) n += u.fan_in();
  return n;
}

bool Circuit::scopes_consistent() const {
  std::vector<Scope> fresh(units_.size(), Scope(num_vars()));
  for (UnitId id : topo_) {
    const Unit& u = units_[id];
    Scope s(num_vars());
    if (u.kind == UnitKind::Input) {
      if (u.var >= 0) s.add(u.var);
    } else {
      for (UnitId c : u.inputs) s = s.union_with(fresh[c]);
    }
    fresh[id] = s;
    if (s != u.scope) return false;
  }
  return true;
}

CircuitBuilder::CircuitBuilder(VariableTablePtr vars, Field field, int hyper_order)
    : vars_(std::move(vars)), field_(field), hyper_order_(hyper_order) {
  if (field_ == Field::Hypercomplex && hyper_order_ < 2) {
    throw FieldError("hypercomplex circuits require order >= 2; use Real or Complex instead");
  }
}

UnitId CircuitBuilder::push(Unit u) {
  units_.push_back(std::move(u));
  return static_cast<UnitId>(units_.size() - 1);
}

UnitId CircuitBuilder::add_input(int var, InputFunction fn) {
  return add_input(var, std::make_shared<InputFunction>(std::move(fn)));
}

UnitId CircuitBuilder::add_input(int var, InputFunctionPtr fn) {
  if (std::holds_alternative<ConstantFn>(fn->fn)) {
    Unit u;
    u.kind = UnitKind::Input;
    u.var = -1;
    u.fn = std::move(fn);
    u.scope = Scope(num_vars());
    return push(std::move(u));
  }
  if (var < 0 || var >= num_vars()) throw ConfigError("input unit variable index out of range");
  Unit u;
  u.kind = UnitKind::Input;
  u.var = var;
  u.fn = std::move(fn);
  u.scope = Scope::singleton(num_vars(), var);
  return push(std::move(u));
}

UnitId CircuitBuilder::add_constant(Cplx value) {
  return add_input(-1, InputFunction(ConstantFn{value}));
}

UnitId CircuitBuilder::add_sum(std::vector<UnitId> inputs, std::vector<WeightExpr> weights) {
  if (inputs.empty()) throw ConfigError("sum unit needs at least one input");
  if (inputs.size() != weights.size()) {
    throw ConfigError("sum unit input and weight counts differ");
  }
  Unit u;
  u.kind = UnitKind::Sum;
  u.scope = Scope(num_vars());
  for (UnitId c : inputs) u.scope = u.scope.union_with(units_.at(c).scope);
  u.inputs = std::move(inputs);
  u.weights = std::move(weights);
  return push(std::move(u));
}

UnitId CircuitBuilder::add_sum_hyper(std::vector<UnitId> inputs, std::vector<Hyper> weights,
                                     std::vector<std::uint8_t> weight_on_right) {
  if (field_ != Field::Hypercomplex) throw FieldError("hyper weights on a non-hypercomplex circuit");
  if (inputs.empty() || inputs.size() != weights.size() ||
      inputs.size() != weight_on_right.size()) {
    throw ConfigError("inconsistent hyper sum unit");
  }
  Unit u;
  u.kind = UnitKind::Sum;
  u.scope = Scope(num_vars());
  for (UnitId c : inputs) u.scope = u.scope.union_with(units_.at(c).scope);
  u.inputs = std::move(inputs);
  u.hyper_weights = std::move(weights);
  u.weight_on_right = std::move(weight_on_right);
  return push(std::move(u));
}

UnitId CircuitBuilder::add_product(const std::vector<UnitId>& inputs) {
  if (inputs.empty()) throw ConfigError("product unit needs at least one input");
  if (inputs.size() == 1) return inputs[0];
  UnitId acc = inputs[0];
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    Unit u;
    u.kind = UnitKind::Product;
    u.inputs = {acc, inputs[i]};
    u.scope = units_[acc].scope.union_with(units_[inputs[i]].scope);
    acc = push(std::move(u));
  }
  return acc;
}

UnitId CircuitBuilder::add_product_canonical(std::vector<UnitId> inputs) {
  std::stable_sort(inputs.begin(), inputs.end(), [&](UnitId x, UnitId y) {
    return units_[x].scope.min_index() < units_[y].scope.min_index();
  });
  return add_product(inputs);
}

Circuit CircuitBuilder::build(UnitId output) {
  if (output < 0 || output >= static_cast<UnitId>(units_.size())) {
    throw ConfigError("invalid output unit");
  }
  // Reachability from the output, then a DFS post-order over the pruned DAG.
  std::vector<char> reach(units_.size(), 0);
  {
    std::vector<UnitId> stack{output};
    reach[output] = 1;
    while (!stack.empty()) {
      const UnitId id = stack.back();
      stack.pop_back();
      for (UnitId c : units_[id].inputs) {
        if (!reach[c]) {
          reach[c] = 1;
          stack.push_back(c);
        }
      }
    }
  }
  std::vector<UnitId> remap(units_.size(), -1);
  Circuit c;
  c.vars_ = vars_;
  c.field_ = field_;
  c.hyper_order_ = hyper_order_;
  c.rg_ = rg_;
  for (std::size_t id = 0; id < units_.size(); ++id) {
    if (!reach[id]) continue;
    remap[id] = static_cast<UnitId>(c.units_.size());
    Unit u = units_[id];
    for (auto& in : u.inputs) {
      in = remap[in];
      if (in < 0) throw ConfigError("unit references a later unit; not a DAG");
    }
    c.units_.push_back(std::move(u));
  }
  c.output_ = remap[output];
  c.topo_.resize(c.units_.size());
  // Builder ids are already topologically ordered (children precede parents).
  for (UnitId i = 0; i < static_cast<UnitId>(c.units_.size()); ++i) c.topo_[i] = i;

  for (const Unit& u : c.units_) {
    if (u.kind == UnitKind::Product && u.fan_in() != 2) {
      throw ConfigError("product unit not binarized");
    }
    if (u.kind == UnitKind::Sum && field_ != Field::Hypercomplex &&
        u.weights.size() != u.inputs.size()) {
      throw ConfigError("sum unit weight count mismatch");
    }
    if (u.kind == UnitKind::Input && u.var >= 0 && u.scope.count() != 1) {
      throw ConfigError("input unit scope must be a singleton");
    }
  }
  return c;
}

}  // namespace socs
