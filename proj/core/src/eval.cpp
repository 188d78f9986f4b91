#include "socs/eval.hpp"

#include <cmath>

#include "socs/errors.hpp"
#include "socs/structure.hpp"

namespace socs {

namespace {

void check_assignment(const Circuit& c, const Assignment& x, const Scope& needed) {
  if (static_cast<int>(x.size()) < c.num_vars()) {
    throw DomainError("assignment does not cover the variable table");
  }
  for (int v = 0; v < c.num_vars(); ++v) {
    if (needed.contains(v)) c.var_table()->check_value(v, x[v]);
  }
}

Cplx weight_value_checked(const WeightExpr& w, const double* theta, Field field) {
  const Cplx v = w.value(theta);
  if (field == Field::Real && v.imag() != 0.0) {
    throw FieldError("complex weight in a real-field circuit");
  }
  return v;
}

}  // namespace

Cplx evaluate(const Circuit& c, const Assignment& x, EvalMode mode, const double* theta) {
  if (c.field() == Field::Hypercomplex) {
    throw FieldError("hypercomplex circuits evaluate through evaluate_hyper");
  }
  check_assignment(c, x, c.scope());
  switch (mode) {
    case EvalMode::Linear: {
      std::vector<Cplx> val(c.num_units());
      for (UnitId id : c.topo_order()) {
        const Unit& u = c.unit(id);
        switch (u.kind) {
          case UnitKind::Input:
            val[id] = u.var < 0 ? u.fn->eval(Domain::boolean(), 0.0, theta)
                                : u.fn->eval(c.var_table()->at(u.var).domain, x[u.var], theta);
            break;
          case UnitKind::Sum: {
            Cplx acc(0.0, 0.0);
            for (int k = 0; k < u.fan_in(); ++k) {
              acc += u.weights[k].value(theta) * val[u.inputs[k]];
            }
            val[id] = acc;
            break;
          }
          case UnitKind::Product:
            val[id] = val[u.inputs[0]] * val[u.inputs[1]];
            break;
        }
      }
      return val[c.output()];
    }
    case EvalMode::LogComplex:
      return exp_complex(evaluate_log(c, x, theta));
    case EvalMode::LogSign: {
      if (c.field() != Field::Real) {
        throw FieldError("log-sign evaluation is defined for real circuits only");
      }
      std::vector<LogSign> val(c.num_units());
      for (UnitId id : c.topo_order()) {
        const Unit& u = c.unit(id);
        switch (u.kind) {
          case UnitKind::Input: {
            const Cplx v = u.var < 0
                               ? u.fn->eval(Domain::boolean(), 0.0, theta)
                               : u.fn->eval(c.var_table()->at(u.var).domain, x[u.var], theta);
            if (v.imag() != 0.0) throw FieldError("complex leaf in a real-field circuit");
            val[id] = LogSign::from(v.real());
            break;
          }
          case UnitKind::Sum: {
            std::vector<std::pair<double, LogSign>> terms;
            terms.reserve(u.fan_in());
            for (int k = 0; k < u.fan_in(); ++k) {
              const Cplx w = weight_value_checked(u.weights[k], theta, c.field());
              terms.emplace_back(w.real(), val[u.inputs[k]]);
            }
            val[id] = logsumexp_sign(terms);
            break;
          }
          case UnitKind::Product:
            val[id] = logsign_mul(val[u.inputs[0]], val[u.inputs[1]]);
            break;
        }
      }
      return Cplx(val[c.output()].value(), 0.0);
    }
  }
  throw Error("unreachable evaluation mode");
}

LogComplex evaluate_log(const Circuit& c, const Assignment& x, const double* theta) {
  check_assignment(c, x, c.scope());
  if (c.field() == Field::Hypercomplex) {
    throw FieldError("log evaluation is not defined over hypercomplex algebras");
  }
  std::vector<LogComplex> val(c.num_units());
  for (UnitId id : c.topo_order()) {
    const Unit& u = c.unit(id);
    switch (u.kind) {
      case UnitKind::Input:
        val[id] = u.var < 0 ? log_complex(u.fn->eval(Domain::boolean(), 0.0, theta))
                            : u.fn->eval_log(c.var_table()->at(u.var).domain, x[u.var], theta);
        break;
      case UnitKind::Sum: {
        std::vector<std::pair<Cplx, LogComplex>> terms;
        terms.reserve(u.fan_in());
        for (int k = 0; k < u.fan_in(); ++k) {
          terms.emplace_back(u.weights[k].value(theta), val[u.inputs[k]]);
        }
        val[id] = logsumexp_complex(terms);
        break;
      }
      case UnitKind::Product:
        val[id] = log_mul(val[u.inputs[0]], val[u.inputs[1]]);
        break;
    }
  }
  return val[c.output()];
}

Hyper evaluate_hyper(const Circuit& c, const Assignment& x) {
  check_assignment(c, x, c.scope());
  const int order = c.field() == Field::Hypercomplex ? c.hyper_order()
                    : c.field() == Field::Complex    ? 1
                                                     : 0;
  auto embed = [order](Cplx v) {
    if (order == 0) {
      if (v.imag() != 0.0) throw FieldError("complex value in a real circuit");
      return Hyper::real(v.real());
    }
    return Hyper::from_complex(v, 1).promoted(order);
  };
  std::vector<Hyper> val(c.num_units(), Hyper(order));
  for (UnitId id : c.topo_order()) {
    const Unit& u = c.unit(id);
    switch (u.kind) {
      case UnitKind::Input:
        val[id] = embed(u.var < 0
                            ? u.fn->eval(Domain::boolean(), 0.0, nullptr)
                            : u.fn->eval(c.var_table()->at(u.var).domain, x[u.var], nullptr));
        break;
      case UnitKind::Sum: {
        Hyper acc(order);
        for (int k = 0; k < u.fan_in(); ++k) {
          const bool hyper = !u.hyper_weights.empty();
          const Hyper w =
              hyper ? u.hyper_weights[k] : embed(u.weights[k].value(nullptr));
          const bool right = hyper && u.weight_on_right[k];
          acc = acc + (right ? val[u.inputs[k]] * w : w * val[u.inputs[k]]);
        }
        val[id] = acc;
        break;
      }
      case UnitKind::Product:
        val[id] = val[u.inputs[0]] * val[u.inputs[1]];
        break;
    }
  }
  return val[c.output()];
}

namespace {

LogComplex marginal_forward(const Circuit& c, const Scope* keep, const Assignment* x,
                            const double* theta, std::vector<LogComplex>* out_values) {
  const auto report = check_smooth_decomposable(c);
  if (!report.ok()) {
    throw StructureError("marginalization requires a smooth and decomposable circuit");
  }
  std::vector<LogComplex> local;
  std::vector<LogComplex>& val = out_values ? *out_values : local;
  val.assign(c.num_units(), LogComplex::zero());
  for (UnitId id : c.topo_order()) {
    const Unit& u = c.unit(id);
    switch (u.kind) {
      case UnitKind::Input: {
        if (u.var < 0) {
          val[id] = log_complex(u.fn->eval(Domain::boolean(), 0.0, theta));
        } else if (keep != nullptr && keep->contains(u.var)) {
          val[id] = u.fn->eval_log(c.var_table()->at(u.var).domain, (*x)[u.var], theta);
        } else {
          val[id] = log_complex(u.fn->integrate(c.var_table()->at(u.var).domain, theta));
        }
        break;
      }
      case UnitKind::Sum: {
        std::vector<std::pair<Cplx, LogComplex>> terms;
        terms.reserve(u.fan_in());
        for (int k = 0; k < u.fan_in(); ++k) {
          terms.emplace_back(u.weights[k].value(theta), val[u.inputs[k]]);
        }
        val[id] = logsumexp_complex(terms);
        break;
      }
      case UnitKind::Product:
        val[id] = log_mul(val[u.inputs[0]], val[u.inputs[1]]);
        break;
    }
  }
  return val[c.output()];
}

}  // namespace

Cplx marginalize(const Circuit& c, const Scope& keep, const Assignment& x, const double* theta) {
  return exp_complex(marginalize_log(c, keep, x, theta));
}

LogComplex marginalize_log(const Circuit& c, const Scope& keep, const Assignment& x,
                           const double* theta) {
  Assignment padded = x;
  if (static_cast<int>(padded.size()) < c.num_vars()) padded.resize(c.num_vars(), 0.0);
  check_assignment(c, padded, keep.intersect_with(c.scope()));
  return marginal_forward(c, &keep, &padded, theta, nullptr);
}

Cplx partition_function(const Circuit& c, const double* theta) {
  return exp_complex(log_partition(c, theta));
}

LogComplex log_partition(const Circuit& c, const double* theta) {
  return marginal_forward(c, nullptr, nullptr, theta, nullptr);
}

void tape_forward(const Circuit& c, const double* theta, const Assignment* x, const Scope* keep,
                  EvalTape& tape) {
  tape.reset(c.num_units());
  if (keep == nullptr && x != nullptr) {
    // plain data pass: every leaf evaluates at x
    const Scope all = Scope::full(c.num_vars());
    check_assignment(c, *x, c.scope());
    tape.integrated_pass = false;
    Scope full = all;
    marginal_forward(c, &full, x, theta, &tape.values);
    return;
  }
  tape.integrated_pass = true;
  if (x != nullptr && keep != nullptr) {
    marginal_forward(c, keep, x, theta, &tape.values);
  } else {
    marginal_forward(c, nullptr, nullptr, theta, &tape.values);
  }
}

}  // namespace socs
