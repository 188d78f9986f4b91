#pragma once

#include <vector>

#include "socs/circuit.hpp"
#include "socs/eval.hpp"

namespace socs {

/// Matrix-product-state (tensor-train) factorization over d variables with
/// domain size v and rank r. tensors[0] is v*r, tensors[j] for the middle
/// sites is v*r*r (row-major [x][a][b]), tensors[d-1] is v*r.
struct MPS {
  Field field = Field::Real;
  int d = 0, v = 0, r = 0;
  std::vector<std::vector<Cplx>> tensors;

  void validate() const;  // throws ShapeError
  Cplx contract(const std::vector<int>& x) const;
};

/// Structured-decomposable circuit of size O(d r^2) computing the MPS
/// contraction; the product units condition one variable at a time.
Circuit mps_to_circuit(const MPS& m);

/// Born machine density |psi(x)|^2 as a squared circuit.
Circuit born_machine(const MPS& m);

/// Real decomposition of a circuit over a Cayley-Dickson algebra: 2^order
/// real circuits c_i, pairwise compatible when the input is structured, with
/// c(x) = sum_i e_i c_i(x). Parameters are snapshot at their current values.
std::vector<Circuit> hypercomplex_decompose(const Circuit& c);

/// PSD circuit: components c_1..c_r (pairwise compatible, equal scope) and a
/// real symmetric PSD matrix A, computing c(x)^T A c(x).
struct PSDModel {
  std::vector<Circuit> components;
  std::vector<std::vector<double>> matrix;

  Cplx eval(const Assignment& x) const;
};

/// Eigendecomposition-based rewrite of a PSD circuit as a sum of squares:
/// sum_i lambda_i (w_i^T c(x))^2 over the positive eigenpairs.
Circuit psd_to_socs(const PSDModel& p);

/// Converse embedding: the component stack of a sum-of-squares circuit with
/// the coefficient diagonal as A (the identity for unit coefficients).
PSDModel socs_to_psd(const Circuit& socs);

/// Squared neural family: density mu(x) * ||NN_sigma(t(x))||^2 with
/// sigma in {exp, cos}, factorized base measure and per-variable statistics.
/// Finite variables carry an explicit statistic table t (C_u columns per
/// value) and base weights mu; continuous variables use a Gaussian base
/// measure with the identity statistic (C_u = 1).
struct SnefySpec {
  enum class Sigma { Exp, Cos };

  struct Var {
    bool finite = false;
    int cardinality = 0;
    std::vector<double> mu_weights;           // finite: mu_u(value), nonnegative
    std::vector<std::vector<double>> t;       // finite: per value, C_u statistics
    double mu_mean = 0.0, mu_stddev = 1.0;    // continuous Gaussian base
  };

  Sigma sigma = Sigma::Exp;
  std::vector<std::vector<double>> V;  // R x S
  std::vector<std::vector<double>> W;  // S x C, columns partitioned per variable
  std::vector<double> b;               // S
  std::vector<Var> vars;

  int c_u(std::size_t u) const { return vars[u].finite ? int(vars[u].t.at(0).size()) : 1; }
  void validate() const;  // throws ConfigError
  /// Direct evaluation of mu(x) * ||NN_sigma(t(x))||^2.
  double direct(const Assignment& x) const;

  VariableTablePtr variable_table() const;
};

/// Sum-of-squares circuit computing the squared neural family exactly.
Circuit snefy_to_socs(const SnefySpec& s);

/// Unrolls a monotone structured circuit with indicator leaves into an
/// explicit sum of squares: one square per induced sub-circuit, with the
/// square root of the accumulated weight as its coefficient. Throws
/// BudgetExceededError when the number of induced sub-circuits exceeds the
/// cap (the bound is exponential; this exists for verification, not scale).
Circuit unroll_to_sos(const Circuit& c, std::size_t max_terms = 4096);

}  // namespace socs
