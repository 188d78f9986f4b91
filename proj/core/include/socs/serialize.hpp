#pragma once

#include <string>

#include "socs/constructions.hpp"
#include "socs/model.hpp"
#include "socs/reductions.hpp"
#include "socs/training.hpp"

namespace socs {

/// Canonical (sorted-key) JSON of a circuit. Weights and leaf parameters are
/// serialized at their current values; composed product leaves are collapsed
/// to ground leaf functions.
std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const std::string& text);

std::string model_to_json(const Model& m);
Model model_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

MPS mps_from_json(const std::string& text);
std::string mps_to_json(const MPS& m);
GraphSpec graph_from_json(const std::string& text);
PSDModel psd_from_json(const std::string& text);
SnefySpec snefy_from_json(const std::string& text);

/// Header-bearing CSV with columns bound to variable names. Every variable
/// must appear as a column; values are range-checked against domains.
Dataset dataset_from_csv(const std::string& path, const VariableTable& vars);
std::vector<std::string> csv_column_names(const std::string& path);

}  // namespace socs
