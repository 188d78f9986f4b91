#pragma once

#include <optional>
#include <vector>

#include "socs/circuit.hpp"

namespace socs {

/// Full assignment: one value per variable-table entry (category codes for
/// finite domains, reals otherwise). Variables outside the circuit scope are
/// ignored.
using Assignment = std::vector<double>;

/// Forward evaluation of c at x in the requested semiring. LogSign is only
/// defined for circuits over the real field.
Cplx evaluate(const Circuit& c, const Assignment& x, EvalMode mode = EvalMode::LogComplex,
              const double* theta = nullptr);

/// Log-space forward pass; the workhorse behind evaluate and the tape.
LogComplex evaluate_log(const Circuit& c, const Assignment& x, const double* theta = nullptr);

/// Forward evaluation of a hypercomplex circuit (linear space).
Hyper evaluate_hyper(const Circuit& c, const Assignment& x);

/// Integrates out every variable not in `keep`; values of kept variables are
/// read from `x`. The circuit must be smooth and decomposable and all
/// marginalized leaves integrable.
Cplx marginalize(const Circuit& c, const Scope& keep, const Assignment& x,
                 const double* theta = nullptr);
LogComplex marginalize_log(const Circuit& c, const Scope& keep, const Assignment& x,
                           const double* theta = nullptr);

/// Partition function: marginalization over every variable.
Cplx partition_function(const Circuit& c, const double* theta = nullptr);
LogComplex log_partition(const Circuit& c, const double* theta = nullptr);

/// Per-unit forward values and adjoints of one reverse sweep. Forward values
/// are kept in log space; adjoints are linear complex values with the
/// convention a = dL/dRe(v) + i dL/dIm(v).
struct EvalTape {
  std::vector<LogComplex> values;
  std::vector<Cplx> adjoints;
  bool integrated_pass = false;

  void reset(std::size_t n) {
    values.assign(n, LogComplex::zero());
    adjoints.assign(n, Cplx(0.0, 0.0));
  }
};

/// Forward pass for gradient computation. If `keep` is null every leaf is
/// integrated (the partition-function pass); otherwise leaves over variables
/// outside `keep` are integrated and the rest evaluate at x.
void tape_forward(const Circuit& c, const double* theta, const Assignment* x, const Scope* keep,
                  EvalTape& tape);

/// Reverse sweep. Accumulates dL/d(theta) into grad given that
/// tape.adjoints[output] has been seeded by the caller. `x` and `keep` must
/// match the forward pass.
void tape_backward(const Circuit& c, const double* theta, EvalTape& tape, double* grad,
                   const Assignment* x, const Scope* keep);

/// log c(x); accumulates scale * d(log|c(x)|)/d(theta) into grad when grad is
/// non-null. Throws NumericalError if c(x) is exactly zero.
LogComplex grad_log_value(const Circuit& c, const double* theta, const Assignment& x, double scale,
                          double* grad);

/// log Z; accumulates scale * d(log|Z|)/d(theta) into grad when grad is
/// non-null. Throws NumericalError if Z is exactly zero.
LogComplex grad_log_partition(const Circuit& c, const double* theta, double scale, double* grad);

}  // namespace socs
