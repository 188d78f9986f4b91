#pragma once

#include <vector>

#include "socs/circuit.hpp"
#include "socs/eval.hpp"

namespace socs {

/// Product of two compatible circuits as a smooth, decomposable circuit
/// computing c1(x) * c2(x). Size is at most |c1| * |c2|. With `use_cache`
/// each unit pair is expanded once; disabling it is only useful for testing
/// cache soundness on small circuits.
Circuit multiply(const Circuit& c1, const Circuit& c2, bool use_cache = true);

/// Same-shape circuit computing the complex conjugate: every weight and every
/// complex leaf entry conjugated. Identity on real circuits.
Circuit conjugate(const Circuit& c);

/// Squared circuit: multiply(c, c) over the reals, multiply(conjugate(c), c)
/// over the complexes (the modulus square), and a sum of squares of the real
/// decomposition over hypercomplex algebras. Requires self-compatibility.
Circuit square(const Circuit& c);

/// Circuit computing sum_i coefficients[i] * cs[i](x)^2 as a single root sum
/// over materialized squares. Components must be pairwise compatible and
/// coefficients nonnegative (all 1 when omitted). The result carries a
/// SocsStructure record.
Circuit socs_sum(const std::vector<Circuit>& cs, std::vector<double> coefficients = {});

/// Product of a monotone circuit and a sum-of-squares circuit. The returned
/// materialized circuit carries a MuSocsStructure record for split-log
/// evaluation (needed only to integrate; data terms never materialize).
Circuit monotone_times_socs(const Circuit& mono, const Circuit& socs);

/// log of a monotone-times-SOCS circuit value computed from its factors:
/// log c1(x) + log sum_i exp(2 log |c_i(x)|).
LogComplex split_log_value(const Circuit& musocs, const Assignment& x,
                           const double* theta = nullptr);

/// Evidence conditioning: leaves over assigned variables become constants
/// (evaluated at `theta` when given) and the circuit is restricted to the
/// remaining variables. Sum-of-squares provenance is conditioned alongside.
Circuit condition(const Circuit& c, const Scope& assigned, const Assignment& values,
                  const double* theta = nullptr);

/// Smoothing gadget: a circuit that outputs 1 for every assignment of the
/// given (finite-domain) scope, built per variable as a unit-weight sum over
/// all indicators.
Circuit constant_one(const VariableTablePtr& vars, const Scope& scope,
                     Field field = Field::Real);

/// Adds the constant-one gadget for `scope` into an existing builder and
/// returns its root unit (or -1 for an empty scope).
UnitId add_constant_one(CircuitBuilder& b, const Scope& scope);

}  // namespace socs
