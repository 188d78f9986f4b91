#include "socs/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "socs/compose.hpp"
#include "socs/errors.hpp"
#include "socs/rng.hpp"

namespace socs {

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (!(learning_rate >= 0.0)) throw ConfigError("learning_rate must be nonnegative");
  if (patience < 1) throw ConfigError("patience must be at least 1");
  if (max_epochs < 1) throw ConfigError("max_epochs must be at least 1");
}

void Dataset::validate(const VariableTable& vars) const {
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != vars.size()) {
      throw ConfigError("row width does not match the variable table");
    }
    for (int v = 0; v < vars.size(); ++v) vars.check_value(v, row[v]);
  }
}

namespace {

/// log Z of the model's normalizer; must be a finite positive real.
double checked_log_z(const Model& m, double scale, double* grad) {
  const LogComplex lz = grad_log_partition(m.normalizer, m.theta(), scale, grad);
  if (!std::isfinite(lz.log_mag) || std::abs(lz.arg) > 1e-6) {
    throw NumericalError("partition function is not a positive real");
  }
  return lz.log_mag;
}

/// log c(x) for the model's class, with optional gradient accumulation
/// weighted by `scale` (the adjoint multiplier on log c(x)).
double data_log_value(const Model& m, const Assignment& x, double scale,
                      std::vector<double>* grad) {
  double* g = grad ? grad->data() : nullptr;
  switch (m.cls) {
    case ModelClass::Monotone: {
      const LogComplex l = grad_log_value(m.components[0], m.theta(), x, scale, g);
      return l.log_mag;
    }
    case ModelClass::SquaredReal:
    case ModelClass::SquaredComplex: {
      const LogComplex l = grad_log_value(m.components[0], m.theta(), x, 2.0 * scale, g);
      return 2.0 * l.log_mag;
    }
    case ModelClass::Socs: {
      std::vector<LogComplex> ls(m.components.size());
      std::vector<std::pair<Cplx, LogComplex>> terms;
      for (std::size_t i = 0; i < m.components.size(); ++i) {
        ls[i] = evaluate_log(m.components[i], x, m.theta());
        if (!ls[i].is_zero()) {
          terms.emplace_back(Cplx(1.0, 0.0), LogComplex{2.0 * ls[i].log_mag, 0.0});
        }
      }
      const LogComplex s = logsumexp_complex(terms);
      if (s.is_zero()) throw NumericalError("log of a zero data term");
      if (g != nullptr) {
        for (std::size_t i = 0; i < m.components.size(); ++i) {
          if (ls[i].is_zero()) continue;
          const double weight = std::exp(2.0 * ls[i].log_mag - s.log_mag);
          if (weight == 0.0) continue;
          grad_log_value(m.components[i], m.theta(), x, 2.0 * scale * weight, g);
        }
      }
      return s.log_mag;
    }
    case ModelClass::MonotoneTimesSocs: {
      const LogComplex lm = grad_log_value(m.components[0], m.theta(), x, scale, g);
      std::vector<LogComplex> ls(m.components.size() - 1);
      std::vector<std::pair<Cplx, LogComplex>> terms;
      for (std::size_t i = 1; i < m.components.size(); ++i) {
        ls[i - 1] = evaluate_log(m.components[i], x, m.theta());
        if (!ls[i - 1].is_zero()) {
          terms.emplace_back(Cplx(1.0, 0.0), LogComplex{2.0 * ls[i - 1].log_mag, 0.0});
        }
      }
      const LogComplex s = logsumexp_complex(terms);
      if (s.is_zero()) throw NumericalError("log of a zero data term");
      if (g != nullptr) {
        for (std::size_t i = 1; i < m.components.size(); ++i) {
          if (ls[i - 1].is_zero()) continue;
          const double weight = std::exp(2.0 * ls[i - 1].log_mag - s.log_mag);
          if (weight == 0.0) continue;
          grad_log_value(m.components[i], m.theta(), x, 2.0 * scale * weight, g);
        }
      }
      return lm.log_mag + s.log_mag;
    }
  }
  throw Error("unreachable model class");
}

BatchResult nll_batch_impl(const Model& m, const std::vector<const Assignment*>& batch,
                           std::vector<double>* grad) {
  if (batch.empty()) throw ConfigError("empty batch");
  BatchResult r;
  const double n = double(batch.size());
  r.log_z = checked_log_z(m, grad ? n : 0.0, grad ? grad->data() : nullptr);
  r.per_sample_ll.reserve(batch.size());
  double data_sum = 0.0;
  for (const Assignment* x : batch) {
    const double lv = data_log_value(m, *x, grad ? -1.0 : 0.0, grad);
    data_sum += lv;
    r.per_sample_ll.push_back(lv - r.log_z);
  }
  r.loss = n * r.log_z - data_sum;
  return r;
}

}  // namespace

BatchResult nll_batch(const Model& m, const std::vector<const Assignment*>& batch) {
  return nll_batch_impl(m, batch, nullptr);
}

BatchResult nll_batch_grad(const Model& m, const std::vector<const Assignment*>& batch,
                           std::vector<double>& grad) {
  return nll_batch_impl(m, batch, &grad);
}

double mean_nll(const Model& m, const Dataset& data, int batch_size) {
  if (data.rows.empty()) throw ConfigError("empty dataset");
  double total = 0.0;
  std::vector<const Assignment*> batch;
  for (std::size_t i = 0; i < data.rows.size(); i += batch_size) {
    batch.clear();
    for (std::size_t j = i; j < std::min(data.rows.size(), i + batch_size); ++j) {
      batch.push_back(&data.rows[j]);
    }
    total += nll_batch(m, batch).loss;
  }
  return total / double(data.rows.size());
}

FitResult fit(Model model, const Dataset& train, const Dataset& valid, const TrainConfig& cfg) {
  cfg.validate();
  if (train.rows.empty() || valid.rows.empty()) throw ConfigError("empty dataset split");
  train.validate(*model.vars);
  valid.validate(*model.vars);

  const std::size_t n = train.size();
  const std::size_t p = model.params.size();
  std::vector<double> grad(p, 0.0), m1(p, 0.0), m2(p, 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng shuffle_rng(cfg.seed ^ 0x5b07c4a11ed0ULL);

  FitResult out;
  out.best_valid_nll = std::numeric_limits<double>::infinity();
  std::vector<double> best_params = model.params;
  int stale_epochs = 0;
  std::int64_t steps = 0;
  const auto t0 = std::chrono::steady_clock::now();

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    double last_log_z = 0.0;
    std::vector<const Assignment*> batch;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      batch.clear();
      for (std::size_t i = start; i < std::min(n, start + cfg.batch_size); ++i) {
        batch.push_back(&train.rows[order[i]]);
      }
      std::fill(grad.begin(), grad.end(), 0.0);
      const BatchResult br = nll_batch_grad(model, batch, grad);
      epoch_loss += br.loss;
      last_log_z = br.log_z;

      if (cfg.grad_clip > 0.0) {
        double norm2 = 0.0;
        for (double g : grad) norm2 += g * g;
        const double norm = std::sqrt(norm2);
        if (norm > cfg.grad_clip) {
          const double s = cfg.grad_clip / norm;
          for (double& g : grad) g *= s;
        }
      }
      ++steps;
      const double bc1 = 1.0 - std::pow(cfg.beta1, double(steps));
      const double bc2 = 1.0 - std::pow(cfg.beta2, double(steps));
      for (std::size_t i = 0; i < p; ++i) {
        m1[i] = cfg.beta1 * m1[i] + (1.0 - cfg.beta1) * grad[i];
        m2[i] = cfg.beta2 * m2[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
        model.params[i] -=
            cfg.learning_rate * (m1[i] / bc1) / (std::sqrt(m2[i] / bc2) + cfg.epsilon);
      }
    }

    EpochMetrics em;
    em.epoch = epoch;
    em.train_nll = epoch_loss / double(n);
    em.valid_nll = mean_nll(model, valid, cfg.batch_size);
    em.log_z = last_log_z;
    em.wall_time_s =
        std::chrono::duration_cast<std::chrono::duration<double>>(
            std::chrono::steady_clock::now() - t0)
            .count();
    out.trace.push_back(em);

    const double rel = (out.best_valid_nll - em.valid_nll) /
                       std::max(std::abs(out.best_valid_nll), 1e-12);
    if (em.valid_nll < out.best_valid_nll &&
        (!std::isfinite(out.best_valid_nll) || rel > cfg.min_rel_improvement)) {
      out.best_valid_nll = em.valid_nll;
      out.best_epoch = epoch;
      best_params = model.params;
      stale_epochs = 0;
    } else {
      if (em.valid_nll < out.best_valid_nll) {
        // still keep the better checkpoint even when the improvement is below
        // the patience threshold
        out.best_valid_nll = em.valid_nll;
        out.best_epoch = epoch;
        best_params = model.params;
      }
      ++stale_epochs;
      if (stale_epochs >= cfg.patience) break;
    }
  }

  model.params = best_params;
  out.model = std::move(model);
  return out;
}

}  // namespace socs
