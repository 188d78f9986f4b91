#pragma once

#include <functional>
#include <vector>

#include "socs/circuit.hpp"
#include "socs/eval.hpp"

namespace socs {

/// Number of joint assignments of a finite-domain variable table; throws
/// BudgetExceededError above the cap (default 2^24).
std::uint64_t assignment_count(const VariableTable& vars, std::uint64_t cap = 1ull << 24);

/// Decodes a mixed-radix index into an assignment (first variable is the
/// least significant digit).
Assignment assignment_from_index(const VariableTable& vars, std::uint64_t index);

/// Exhaustive output table of a circuit over finite domains, indexed by
/// assignment_from_index. The oracle every enumeration test compares against.
std::vector<Cplx> brute_force_table(const Circuit& c, std::uint64_t cap = 1ull << 24);

/// Dense matrix of a function's outputs under a variable bipartition. Row i
/// assigns y_vars so that y_vars[t] reads bit t of i (columns likewise), i.e.
/// the t-th listed variable has place value 2^t.
struct ValueMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
};

ValueMatrix value_matrix(const std::function<double(const Assignment&)>& f,
                         const VariableTable& vars, const std::vector<int>& y_vars,
                         const std::vector<int>& z_vars);
ValueMatrix value_matrix(const Circuit& c, const std::vector<int>& y_vars,
                         const std::vector<int>& z_vars);

/// Value matrix of the binary sum function: the sum function with the
/// auxiliary block fixed by per-side permutations (identity by default, i.e.
/// perm[t] = t gives the t-th listed variable place value 2^t).
ValueMatrix binary_sum_value_matrix(int ny, int nz, const std::vector<int>& perm_y = {},
                                    const std::vector<int>& perm_z = {});

/// q x q matrix K_ij = n_i + n_j - 1 over the first q integers n with 2n - 1
/// prime.
std::vector<std::vector<double>> prime_matrix(int q);

/// Rank via row reduction with a numerical tolerance.
int matrix_rank(std::vector<std::vector<double>> m, double tol = 1e-9);

/// Minimum rank over all element-wise signed square roots of a nonnegative
/// matrix; exhaustive over sign patterns, so at most 16 entries.
int sqrank_bruteforce(const std::vector<std::vector<double>>& m, double tol = 1e-9);

/// Central finite differences of a scalar function, h = 1e-5 by default.
std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> theta,
    double h = 1e-5);

/// Composite Simpson quadrature (n even intervals).
double simpson(const std::function<double(double)>& f, double lo, double hi, int n = 4096);

}  // namespace socs
