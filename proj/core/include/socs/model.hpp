#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "socs/circuit.hpp"
#include "socs/region_graph.hpp"

namespace socs {

enum class ModelClass { Monotone, SquaredReal, SquaredComplex, Socs, MonotoneTimesSocs };

enum class InputFamily { Categorical, Gaussian, EmbeddingReal, EmbeddingComplex };

std::string to_string(ModelClass c);
std::string to_string(InputFamily f);
ModelClass model_class_from_string(const std::string& s);
InputFamily input_family_from_string(const std::string& s);

/// Layer configuration of a tensorized model.
struct LayerSpec {
  int sum_units = 1;         // K_S: sum/product units per region
  int input_units = 1;       // K_I: input units per leaf region
  ModelClass model_class = ModelClass::Monotone;
  InputFamily input_family = InputFamily::Categorical;
  int num_squares = 1;       // r, for the sum-of-squares class
  std::uint64_t seed = 0;
};

/// A trainable model: its component circuits share one parameter vector, and
/// `normalizer` is the materialized nonnegative circuit whose integral is the
/// partition function.
///
/// Components by class: Monotone/SquaredReal/SquaredComplex hold the single
/// base circuit; Socs holds its r compatible components; MonotoneTimesSocs
/// holds the monotone factor first, then the square components.
struct Model {
  ModelClass cls = ModelClass::Monotone;
  std::vector<Circuit> components;
  Circuit normalizer;
  std::vector<double> params;
  std::vector<std::string> param_names;
  VariableTablePtr vars;
  RegionGraphPtr region_graph;
  LayerSpec spec;

  int num_params() const { return static_cast<int>(params.size()); }
  const double* theta() const { return params.data(); }
};

}  // namespace socs
