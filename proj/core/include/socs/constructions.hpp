#pragma once

#include <utility>
#include <vector>

#include "socs/circuit.hpp"
#include "socs/eval.hpp"

namespace socs {

/// Simple undirected graph over vertices 0..vertices-1.
struct GraphSpec {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;

  void validate() const;  // no self-loops, no duplicate edges
  static GraphSpec single_edge() { return {2, {{0, 1}}}; }
  static GraphSpec triangle() { return {3, {{0, 1}, {1, 2}, {0, 2}}}; }
  static GraphSpec path(int n);
};

// Variable layouts. The unique-disjointness family lives over one Boolean
// variable per vertex. The sum function over k(k+1) Boolean variables: X_i at
// index i, X_{i,j} at index k + i*k + j (0-based i, j < k). The plus-sum
// family appends X_{v,j} blocks and two selector variables Z1, Z2.
VariableTablePtr udisj_variables(const GraphSpec& g);
VariableTablePtr sum_function_variables(int k);
VariableTablePtr ups_variables(const GraphSpec& g);
int ups_z1_index(const GraphSpec& g);
int ups_z2_index(const GraphSpec& g);
VariableTablePtr motzkin_variables(int d);

// Direct closed-form evaluations; the oracles tests compare circuits against.
double eval_udisj(const GraphSpec& g, const Assignment& x);
double eval_sum_function(int k, const Assignment& x);
double eval_udisj_plus_sum(const GraphSpec& g, const Assignment& x);
double eval_udisj_times_quadratic(const GraphSpec& g, const Assignment& x);
double motzkin_polynomial(double x1, double x2);
double eval_motzkin_extension(int d, const Assignment& x);

/// Squared circuit computing (1 - sum_{uv in E} X_u X_v)^2.
Circuit build_udisj(const GraphSpec& g);

/// Monotone structured circuit computing the sum function
/// sum_i X_i * (sum_j 2^(j-1) X_{i,j}).
Circuit build_sum_function(int k);

/// The same function as an explicit sum of k^2 squares
/// (2^((j-1)/2) X_i X_{i,j})^2, exploiting Boolean idempotency.
Circuit build_sum_function_sos(int k);

/// Sum-of-squares circuit with |V|^2 + 1 squares computing
/// Z1 (1 - sum X_u X_v)^2 + Z2 sum_v X_v sum_j 2^(j-1) X_{v,j}.
Circuit build_udisj_plus_sum(const GraphSpec& g);

/// Sum-of-squares circuit with |E| + 1 squares computing
/// (1 - sum X_u X_v)^2 (1 + sum X_u X_v).
Circuit build_udisj_times_quadratic(const GraphSpec& g);

/// Structured circuit with univariate polynomial leaves computing the
/// Motzkin polynomial in (X1, X2) plus sum_i Y_i^2 over d extra variables;
/// nonnegative everywhere but not a polynomial sum of squares.
Circuit build_motzkin_extension(int d);

}  // namespace socs
