#include <cmath>

#include "socs/errors.hpp"
#include "socs/eval.hpp"

namespace socs {

namespace {

void pf_backprop(const ParamField& p, double d, const double* theta, double* grad) {
  if (p.slot < 0) return;
  grad[p.slot] += p.exp_transform ? d * p.get(theta) : d;
}

void leaf_point_backward(const InputFunction& f, const Domain& d, double x, Cplx adj,
                         const double* theta, double* grad);

void leaf_integrated_backward(const InputFunction& f, const Domain& d, Cplx adj,
                              const double* theta, double* grad);

void flatten_factors(const InputFunction& f, std::vector<const InputFunction*>& out) {
  if (const auto* p = std::get_if<ProductOf>(&f.fn)) {
    flatten_factors(*p->lhs, out);
    flatten_factors(*p->rhs, out);
  } else {
    out.push_back(&f);
  }
}

void leaf_point_backward(const InputFunction& f, const Domain& d, double x, Cplx adj,
                         const double* theta, double* grad) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          const double code = std::nearbyint(x);
          pf_backprop(v.probs.at(static_cast<std::size_t>(code)), adj.real(), theta, grad);
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          const double mu = v.mean.get(theta);
          const double ls = v.log_stddev.get(theta);
          const double inv_s = std::exp(-ls);
          const double z = (x - mu) * inv_s;
          const double val = f.eval(d, x, theta).real();
          pf_backprop(v.mean, adj.real() * val * z * inv_s, theta, grad);
          pf_backprop(v.log_stddev, adj.real() * val * (z * z - 1.0), theta, grad);
        } else if constexpr (std::is_same_v<T, Embedding>) {
          const auto code = static_cast<std::size_t>(std::nearbyint(x));
          pf_backprop(v.re.at(code), adj.real(), theta, grad);
          if (!v.im.empty()) {
            pf_backprop(v.im.at(code), v.conjugated ? -adj.imag() : adj.imag(), theta, grad);
          }
        } else if constexpr (std::is_same_v<T, ProductOf>) {
          const Cplx lv = v.lhs->eval(d, x, theta);
          const Cplx rv = v.rhs->eval(d, x, theta);
          leaf_point_backward(*v.lhs, d, x, std::conj(rv) * adj, theta, grad);
          leaf_point_backward(*v.rhs, d, x, std::conj(lv) * adj, theta, grad);
        }
        // Indicator, Polynomial, ConstantFn, ExpQuad carry no trainable fields.
      },
      f.fn);
}

void product_integrated_backward(const InputFunction& f, const Domain& d, Cplx adj,
                                 const double* theta, double* grad) {
  std::vector<const InputFunction*> fs;
  flatten_factors(f, fs);
  const std::size_t n = fs.size();

  if (f.leaf_class() == LeafClass::FiniteVector) {
    // I = sum_v prod_k f_k(v); route each value's term like a small product.
    std::vector<Cplx> vals(n);
    for (int v = 0; v < d.cardinality; ++v) {
      for (std::size_t k = 0; k < n; ++k) vals[k] = fs[k]->eval(d, v, theta);
      for (std::size_t k = 0; k < n; ++k) {
        Cplx others(1.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
          if (j != k) others *= vals[j];
        }
        leaf_point_backward(*fs[k], d, v, std::conj(others) * adj, theta, grad);
      }
    }
    return;
  }

  if (f.leaf_class() == LeafClass::GaussLike) {
    bool trainable = false;
    for (const auto* g : fs) trainable = trainable || g->has_trainable_params();
    if (!trainable) return;
    // Closed-form derivatives of I = int prod_k N(x | mu_k, sigma_k) dx.
    double lambda_sum = 0.0, eta_sum = 0.0;
    for (const auto* g : fs) {
      if (const auto* gg = std::get_if<Gaussian>(&g->fn)) {
        const double mu = gg->mean.get(theta);
        const double lam = std::exp(-2.0 * gg->log_stddev.get(theta));
        lambda_sum += lam;
        eta_sum += mu * lam;
      } else if (const auto* eq = std::get_if<ExpQuad>(&g->fn)) {
        if (eq->b.imag() != 0.0 || eq->c.imag() != 0.0) {
          throw NumericalError("gradient through complex exponential leaves is unsupported");
        }
        lambda_sum += 2.0 * eq->a;
        eta_sum += eq->b.real();
      }
    }
    const double I = f.integrate(d, theta).real();
    const double m = eta_sum / lambda_sum;
    for (const auto* g : fs) {
      const auto* gg = std::get_if<Gaussian>(&g->fn);
      if (gg == nullptr) continue;
      const double mu = gg->mean.get(theta);
      const double lam = std::exp(-2.0 * gg->log_stddev.get(theta));
      pf_backprop(gg->mean, adj.real() * I * lam * (m - mu), theta, grad);
      pf_backprop(gg->log_stddev,
                  adj.real() * I * (-1.0 + lam / lambda_sum + lam * (mu - m) * (mu - m)), theta,
                  grad);
    }
    return;
  }
  // Poly / Constant factors are literal.
}

void leaf_integrated_backward(const InputFunction& f, const Domain& d, Cplx adj,
                              const double* theta, double* grad) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          for (const auto& p : v.probs) pf_backprop(p, adj.real(), theta, grad);
        } else if constexpr (std::is_same_v<T, Embedding>) {
          for (const auto& p : v.re) pf_backprop(p, adj.real(), theta, grad);
          for (const auto& p : v.im) {
            pf_backprop(p, v.conjugated ? -adj.imag() : adj.imag(), theta, grad);
          }
        } else if constexpr (std::is_same_v<T, ProductOf>) {
          product_integrated_backward(f, d, adj, theta, grad);
        }
        // Gaussian integrates to 1; Indicator to 1; the rest are literal.
      },
      f.fn);
}

}  // namespace

void tape_backward(const Circuit& c, const double* theta, EvalTape& tape, double* grad,
                   const Assignment* x, const Scope* keep) {
  const auto& topo = c.topo_order();
  for (std::size_t t = topo.size(); t-- > 0;) {
    const UnitId id = topo[t];
    const Cplx adj = tape.adjoints[id];
    if (adj == Cplx(0.0, 0.0)) continue;
    const Unit& u = c.unit(id);
    switch (u.kind) {
      case UnitKind::Sum: {
        for (int k = 0; k < u.fan_in(); ++k) {
          const Cplx w = u.weights[k].value(theta);
          tape.adjoints[u.inputs[k]] += std::conj(w) * adj;
          if (grad != nullptr && u.weights[k].has_slots()) {
            u.weights[k].backprop(std::conj(exp_complex(tape.values[u.inputs[k]])) * adj, theta,
                                  grad);
          }
        }
        break;
      }
      case UnitKind::Product: {
        const Cplx va = exp_complex(tape.values[u.inputs[0]]);
        const Cplx vb = exp_complex(tape.values[u.inputs[1]]);
        tape.adjoints[u.inputs[0]] += std::conj(vb) * adj;
        tape.adjoints[u.inputs[1]] += std::conj(va) * adj;
        break;
      }
      case UnitKind::Input: {
        if (grad == nullptr || u.var < 0) break;
        const Domain& d = c.var_table()->at(u.var).domain;
        const bool integrated = keep == nullptr || !keep->contains(u.var);
        if (integrated) {
          leaf_integrated_backward(*u.fn, d, adj, theta, grad);
        } else {
          leaf_point_backward(*u.fn, d, (*x)[u.var], adj, theta, grad);
        }
        break;
      }
    }
  }
}

namespace {

/// Adjoint seed of L = scale * log|v_root|: scale / conj(v_root), formed from
/// the log value to avoid overflow.
Cplx log_loss_seed(const LogComplex& root, double scale) {
  return scale * exp_complex(LogComplex{-root.log_mag, root.arg});
}

}  // namespace

LogComplex grad_log_value(const Circuit& c, const double* theta, const Assignment& x, double scale,
                          double* grad) {
  EvalTape tape;
  const Scope all = Scope::full(c.num_vars());
  tape_forward(c, theta, &x, nullptr, tape);
  const LogComplex root = tape.values[c.output()];
  if (root.is_zero()) {
    throw NumericalError("log of a zero circuit value");
  }
  if (grad != nullptr) {
    tape.adjoints[c.output()] = log_loss_seed(root, scale);
    tape_backward(c, theta, tape, grad, &x, &all);
  }
  return root;
}

LogComplex grad_log_partition(const Circuit& c, const double* theta, double scale, double* grad) {
  EvalTape tape;
  tape_forward(c, theta, nullptr, nullptr, tape);
  const LogComplex root = tape.values[c.output()];
  if (root.is_zero()) {
    throw NumericalError("log of a zero partition function");
  }
  if (grad != nullptr) {
    tape.adjoints[c.output()] = log_loss_seed(root, scale);
    tape_backward(c, theta, tape, grad, nullptr, nullptr);
  }
  return root;
}

}  // namespace socs
