#pragma once

#include <utility>
#include <vector>

#include "socs/circuit.hpp"

namespace socs {

struct StructuralReport {
  bool smooth = true;
  bool decomposable = true;
  std::vector<UnitId> smoothness_witnesses;      // violating sum unit ids
  std::vector<UnitId> decomposability_witnesses;  // violating product unit ids

  bool ok() const { return smooth && decomposable; }
};

struct CompatReport {
  bool compatible = true;
  /// Violating unit-id pairs (first from c1, second from c2); leaf-product
  /// violations and scope-split violations both land here.
  std::vector<std::pair<UnitId, UnitId>> witnesses;
};

/// Report-only check of smoothness and decomposability.
StructuralReport check_smooth_decomposable(const Circuit& c);

/// Compatibility of two smooth, decomposable circuits over the same variable
/// table: every same-scope leaf pair has a closed-form product, and every
/// same-scope product pair splits its scope the same way.
/// Throws StructureError if either circuit fails check_smooth_decomposable.
CompatReport check_compatible(const Circuit& c1, const Circuit& c2);

/// A circuit is structured-decomposable iff it is compatible with itself.
bool structured_decomposable(const Circuit& c);

/// True iff all sum weights are nonnegative and all leaves are of the
/// nonnegative families. Real circuits only (FieldError otherwise).
/// The result is cached on the circuit.
bool check_monotone(const Circuit& c);

}  // namespace socs
