#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "socs/errors.hpp"

namespace socs {

/// Domain descriptor of a single variable.
struct Domain {
  enum class Kind { Boolean, Finite, Real, Interval };
  Kind kind = Kind::Boolean;
  int cardinality = 2;      // Boolean/Finite
  double lo = 0.0, hi = 0.0;  // Interval

  bool is_finite() const { return kind == Kind::Boolean || kind == Kind::Finite; }

  static Domain boolean() { return {Kind::Boolean, 2, 0.0, 0.0}; }
  static Domain finite(int v) { return {Kind::Finite, v, 0.0, 0.0}; }
  static Domain real_line() { return {Kind::Real, 0, 0.0, 0.0}; }
  static Domain interval(double lo, double hi) { return {Kind::Interval, 0, lo, hi}; }

  bool operator==(const Domain& o) const {
    return kind == o.kind && cardinality == o.cardinality && lo == o.lo && hi == o.hi;
  }
};

struct Variable {
  std::string name;
  Domain domain;
};

/// Global table of variables a family of circuits is defined over. Circuits
/// built for composition must share one table instance.
class VariableTable {
public:
  VariableTable() = default;
  explicit VariableTable(std::vector<Variable> vars) : vars_(std::move(vars)) {}

  int size() const { return static_cast<int>(vars_.size()); }
  const Variable& at(int i) const { return vars_.at(i); }
  const std::vector<Variable>& all() const { return vars_; }

  int add(std::string name, Domain d) {
    vars_.push_back({std::move(name), d});
    return size() - 1;
  }

  int index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i) {
      if (vars_[i].name == name) return i;
    }
    return -1;
  }

  /// Throws DomainError if the value is not a member of the variable's domain.
  void check_value(int var, double value) const {
    const Domain& d = vars_.at(var).domain;
    if (d.is_finite()) {
      const double r = std::nearbyint(value);
      if (r != value || r < 0 || r >= d.cardinality) {
        throw DomainError("value " + std::to_string(value) + " outside finite domain of variable " +
                          vars_[var].name);
      }
    } else if (d.kind == Domain::Kind::Interval) {
      if (!(value >= d.lo && value <= d.hi)) {
        throw DomainError("value outside interval domain of variable " + vars_[var].name);
      }
    } else if (!std::isfinite(value)) {
      throw DomainError("non-finite value for variable " + vars_[var].name);
    }
  }

private:
  std::vector<Variable> vars_;
};

using VariableTablePtr = std::shared_ptr<const VariableTable>;

inline VariableTablePtr boolean_variables(int n, const std::string& prefix = "X") {
  std::vector<Variable> vars;
  vars.reserve(n);
  for (int i = 0; i < n; ++i) vars.push_back({prefix + std::to_string(i + 1), Domain::boolean()});
  return std::make_shared<VariableTable>(std::move(vars));
}

}  // namespace socs
