#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "socs/field.hpp"
#include "socs/hyper.hpp"
#include "socs/input_function.hpp"
#include "socs/scope.hpp"
#include "socs/variables.hpp"

namespace socs {

class RegionGraph;
using RegionGraphPtr = std::shared_ptr<const RegionGraph>;

/// A sum-unit weight as a (tiny) expression over the model's real parameter
/// vector. Composition ops (conjugation, circuit products) build Conj/Mul
/// nodes over the source expressions, so one logical parameter can feed many
/// weight sites and gradients accumulate across all of them.
struct WeightExpr {
  enum class Kind : std::uint8_t { Literal, Slot, SlotExp, ComplexSlots, Mul, Conj };

  Kind kind = Kind::Literal;
  Cplx literal{0.0, 0.0};  // Literal value; for slot kinds, the initial value
  int slot = -1;           // Slot/SlotExp; ComplexSlots: real part
  int slot2 = -1;          // ComplexSlots: imaginary part
  std::shared_ptr<const WeightExpr> a, b;  // Mul(a, b) / Conj(a)

  static WeightExpr lit(Cplx v) {
    WeightExpr w;
    w.literal = v;
    return w;
  }
  static WeightExpr lit(double v) { return lit(Cplx(v, 0.0)); }
  static WeightExpr slot_ref(int s, double init) {
    WeightExpr w;
    w.kind = Kind::Slot;
    w.slot = s;
    w.literal = Cplx(init, 0.0);
    return w;
  }
  static WeightExpr slot_exp(int s, double init_log) {
    WeightExpr w;
    w.kind = Kind::SlotExp;
    w.slot = s;
    w.literal = Cplx(std::exp(init_log), 0.0);
    return w;
  }
  static WeightExpr complex_slots(int re_slot, int im_slot, Cplx init) {
    WeightExpr w;
    w.kind = Kind::ComplexSlots;
    w.slot = re_slot;
    w.slot2 = im_slot;
    w.literal = init;
    return w;
  }
  static WeightExpr mul(WeightExpr x, WeightExpr y);
  static WeightExpr conj(WeightExpr x);

  Cplx value(const double* theta) const;
  /// Accumulates dL/d(slots) given the adjoint of this weight's value. The
  /// adjoint convention is dL/dRe + i dL/dIm.
  void backprop(Cplx adjoint, const double* theta, double* grad) const;
  bool is_literal() const { return kind == Kind::Literal; }
  bool has_slots() const;
};

using UnitId = std::int32_t;

enum class UnitKind : std::uint8_t { Input, Sum, Product };

struct Unit {
  UnitKind kind = UnitKind::Input;
  int var = -1;                       // Input; -1 for empty-scope constants
  InputFunctionPtr fn;                // Input
  std::vector<UnitId> inputs;         // Sum / Product
  std::vector<WeightExpr> weights;    // Sum (real/complex fields)
  std::vector<Hyper> hyper_weights;   // Sum (hypercomplex field)
  std::vector<std::uint8_t> weight_on_right;  // Sum, hypercomplex: value*theta
  Scope scope;

  int fan_in() const { return static_cast<int>(inputs.size()); }
};

class Circuit;
struct SocsStructure;
struct MuSocsStructure;

/// Immutable rooted DAG of input/sum/product units. All read operations are
/// safe to run concurrently; construction goes through CircuitBuilder.
class Circuit {
public:
  Circuit() = default;
  Circuit(const Circuit& o) { *this = o; }
  Circuit& operator=(const Circuit& o);
  Circuit(Circuit&&) noexcept = default;
  Circuit& operator=(Circuit&&) noexcept = default;

  const VariableTablePtr& var_table() const { return vars_; }
  int num_vars() const { return vars_ ? vars_->size() : 0; }
  const std::vector<Unit>& units() const { return units_; }
  const Unit& unit(UnitId id) const { return units_[id]; }
  UnitId output() const { return output_; }
  const std::vector<UnitId>& topo_order() const { return topo_; }
  Field field() const { return field_; }
  int hyper_order() const { return hyper_order_; }
  const Scope& scope() const { return units_[output_].scope; }

  /// Circuit size: the number of edges.
  std::int64_t num_edges() const;
  std::size_t num_units() const { return units_.size(); }

  const RegionGraphPtr& region_graph() const { return rg_; }

  const std::shared_ptr<const SocsStructure>& socs_structure() const { return socs_; }
  const std::shared_ptr<const MuSocsStructure>& musocs_structure() const { return musocs_; }
  void attach_socs_structure(std::shared_ptr<const SocsStructure> s) { socs_ = std::move(s); }
  void attach_musocs_structure(std::shared_ptr<const MuSocsStructure> s) {
    musocs_ = std::move(s);
  }

  /// Tri-state monotonicity cache: -1 unknown, 0 no, 1 yes. Managed by
  /// check_monotone.
  int monotone_cache() const { return monotone_cache_.load(std::memory_order_relaxed); }
  void set_monotone_cache(int v) const { monotone_cache_.store(v, std::memory_order_relaxed); }

  /// Recomputes every scope from the leaves and compares with the cache;
  /// returns false on any mismatch.
  bool scopes_consistent() const;

private:
  friend class CircuitBuilder;

  VariableTablePtr vars_;
  std::vector<Unit> units_;
  UnitId output_ = -1;
  std::vector<UnitId> topo_;
  Field field_ = Field::Real;
  int hyper_order_ = 0;
  RegionGraphPtr rg_;
  std::shared_ptr<const SocsStructure> socs_;
  std::shared_ptr<const MuSocsStructure> musocs_;
  mutable std::atomic<std::int8_t> monotone_cache_{-1};
};

/// Provenance attached to sum-of-squares circuits: the component circuits
/// c_i and coefficients so that sum_i coeff_i * c_i(x)^2 equals the circuit.
struct SocsStructure {
  std::vector<Circuit> components;
  std::vector<double> coefficients;
};

/// Provenance attached to monotone-times-SOCS products.
struct MuSocsStructure {
  Circuit monotone;
  Circuit socs;
};

/// Single-writer builder. Fan-in of product units is binarized on
/// construction by a left fold.
class CircuitBuilder {
public:
  explicit CircuitBuilder(VariableTablePtr vars, Field field = Field::Real, int hyper_order = 0);

  UnitId add_input(int var, InputFunction fn);
  UnitId add_input(int var, InputFunctionPtr fn);
  /// Constant leaf with empty scope.
  UnitId add_constant(Cplx value);
  UnitId add_sum(std::vector<UnitId> inputs, std::vector<WeightExpr> weights);
  UnitId add_sum_hyper(std::vector<UnitId> inputs, std::vector<Hyper> weights,
                       std::vector<std::uint8_t> weight_on_right);
  /// Left-fold binarization in the given child order.
  UnitId add_product(const std::vector<UnitId>& inputs);
  /// Sorts children by canonical scope order (min variable index, empty
  /// scopes last) before folding; used by all structured constructions.
  UnitId add_product_canonical(std::vector<UnitId> inputs);

  const Unit& unit(UnitId id) const { return units_[id]; }
  const Scope& scope_of(UnitId id) const { return units_[id].scope; }
  int num_vars() const { return vars_->size(); }
  const VariableTablePtr& var_table() const { return vars_; }

  void set_region_graph(RegionGraphPtr rg) { rg_ = std::move(rg); }

  /// Finalizes the circuit rooted at `output`: prunes unreachable units,
  /// computes a topological order, and validates structural invariants.
  Circuit build(UnitId output);

private:
  UnitId push(Unit u);

  VariableTablePtr vars_;
  Field field_;
  int hyper_order_;
  std::vector<Unit> units_;
  RegionGraphPtr rg_;
};

}  // namespace socs
