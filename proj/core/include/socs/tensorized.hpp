#pragma once

#include "socs/model.hpp"

namespace socs {

/// Builds a trainable structured-decomposable model on a region graph with
/// CP-style sum/product layers and vectorized input layers. Per internal
/// region, K_S sum units are fed by element-wise products of the children's
/// units; leaf regions mix K_I input units of the requested family into K_S
/// units. The model class drives post-processing (squaring, summing squares,
/// the monotone-times-SOCS pairing).
Model build(const RegionGraphPtr& rg, const VariableTablePtr& vars, const LayerSpec& spec);

/// Parameter count of build(rg, vars, spec) without building; exact.
std::int64_t parameter_count(const RegionGraph& rg, const VariableTable& vars,
                             const LayerSpec& spec);

}  // namespace socs
