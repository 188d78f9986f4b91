#pragma once

#include <cstdint>
#include <vector>

#include "socs/eval.hpp"
#include "socs/model.hpp"

namespace socs {

struct TrainConfig {
  int batch_size = 256;
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int patience = 25;       // epochs without relative validation improvement
  int max_epochs = 200;
  std::uint64_t seed = 0;
  double grad_clip = 0.0;  // max gradient norm; 0 disables clipping
  double min_rel_improvement = 1e-4;

  void validate() const;
};

/// Rows of per-variable values (reals or categorical codes).
struct Dataset {
  std::vector<Assignment> rows;

  std::size_t size() const { return rows.size(); }
  /// Column count and domain membership against a variable table.
  void validate(const VariableTable& vars) const;
};

struct BatchResult {
  double loss = 0.0;  // |B| log Z - sum_x log c(x)
  double log_z = 0.0;
  std::vector<double> per_sample_ll;  // log c(x) - log Z
};

/// Batched negative log-likelihood with Z evaluated once on the materialized
/// normalizer. Data terms never materialize products: squared models use
/// 2 log|c(x)|, sums of squares a log-sum-exp over components, and
/// monotone-times-SOCS the split log.
BatchResult nll_batch(const Model& m, const std::vector<const Assignment*>& batch);

/// Same, accumulating dLoss/dtheta into grad (sized num_params, zeroed by the
/// caller).
BatchResult nll_batch_grad(const Model& m, const std::vector<const Assignment*>& batch,
                           std::vector<double>& grad);

/// Mean per-sample negative log-likelihood of a dataset.
double mean_nll(const Model& m, const Dataset& data, int batch_size = 1024);

struct EpochMetrics {
  int epoch = 0;
  double train_nll = 0.0;  // nats per sample
  double valid_nll = 0.0;
  double log_z = 0.0;
  double wall_time_s = 0.0;
};

struct FitResult {
  Model model;  // best-validation checkpoint
  std::vector<EpochMetrics> trace;
  int best_epoch = 0;
  double best_valid_nll = 0.0;
};

/// Adam with per-epoch reshuffles, early stopping on relative validation
/// improvement, and best-checkpoint restore. Deterministic per seed.
FitResult fit(Model model, const Dataset& train, const Dataset& valid, const TrainConfig& cfg);

}  // namespace socs
