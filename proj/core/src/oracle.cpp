#include "socs/oracle.hpp"

#include <cmath>

#include "socs/constructions.hpp"
#include "socs/errors.hpp"

namespace socs {

std::uint64_t assignment_count(const VariableTable& vars, std::uint64_t cap) {
  std::uint64_t n = 1;
  for (const auto& v : vars.all()) {
    if (!v.domain.is_finite()) {
      throw BudgetExceededError("enumeration requires finite domains");
    }
    n *= std::uint64_t(v.domain.cardinality);
    if (n > cap) {
      throw BudgetExceededError("assignment count exceeds the enumeration cap");
    }
  }
  return n;
}

Assignment assignment_from_index(const VariableTable& vars, std::uint64_t index) {
  Assignment x(vars.size(), 0.0);
  for (int v = 0; v < vars.size(); ++v) {
    const auto card = std::uint64_t(vars.at(v).domain.cardinality);
    x[v] = double(index % card);
    index /= card;
  }
  return x;
}

std::vector<Cplx> brute_force_table(const Circuit& c, std::uint64_t cap) {
  const std::uint64_t n = assignment_count(*c.var_table(), cap);
  std::vector<Cplx> out(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    out[i] = evaluate(c, assignment_from_index(*c.var_table(), i), EvalMode::Linear);
  }
  return out;
}

ValueMatrix value_matrix(const std::function<double(const Assignment&)>& f,
                         const VariableTable& vars, const std::vector<int>& y_vars,
                         const std::vector<int>& z_vars) {
  if (y_vars.size() + z_vars.size() > 24) {
    throw BudgetExceededError("value matrix limited to 24 variables");
  }
  ValueMatrix m;
  m.rows = std::size_t(1) << y_vars.size();
  m.cols = std::size_t(1) << z_vars.size();
  m.data.assign(m.rows * m.cols, 0.0);
  Assignment x(vars.size(), 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t t = 0; t < y_vars.size(); ++t) x[y_vars[t]] = double((i >> t) & 1);
    for (std::size_t j = 0; j < m.cols; ++j) {
      for (std::size_t t = 0; t < z_vars.size(); ++t) x[z_vars[t]] = double((j >> t) & 1);
      m.at(i, j) = f(x);
    }
  }
  return m;
}

ValueMatrix value_matrix(const Circuit& c, const std::vector<int>& y_vars,
                         const std::vector<int>& z_vars) {
  return value_matrix(
      [&](const Assignment& x) { return evaluate(c, x, EvalMode::Linear).real(); },
      *c.var_table(), y_vars, z_vars);
}

ValueMatrix binary_sum_value_matrix(int ny, int nz, const std::vector<int>& perm_y,
                                    const std::vector<int>& perm_z) {
  const int k = ny + nz;
  std::vector<int> py(perm_y), pz(perm_z);
  if (py.empty()) {
    for (int t = 0; t < ny; ++t) py.push_back(t);
  }
  if (pz.empty()) {
    for (int t = 0; t < nz; ++t) pz.push_back(t);
  }
  if (static_cast<int>(py.size()) != ny || static_cast<int>(pz.size()) != nz) {
    throw ConfigError("permutation sizes must match the bipartition");
  }
  auto vars = sum_function_variables(k);

  // The first ny listed variables form Y, the rest Z; X_{i,j} is pinned to 1
  // exactly at j = perm(position), giving the t-th variable place value 2^t.
  std::vector<int> ys, zs;
  for (int t = 0; t < ny; ++t) ys.push_back(t);
  for (int t = 0; t < nz; ++t) zs.push_back(ny + t);

  auto f = [&](const Assignment& x0) {
    Assignment x = x0;
    for (int t = 0; t < ny; ++t) {
      const int i = t;
      for (int j = 0; j < k; ++j) x[k + i * k + j] = (j == py[t]) ? 1.0 : 0.0;
    }
    for (int t = 0; t < nz; ++t) {
      const int i = ny + t;
      for (int j = 0; j < k; ++j) x[k + i * k + j] = (j == pz[t]) ? 1.0 : 0.0;
    }
    return eval_sum_function(k, x);
  };
  return value_matrix(f, *vars, ys, zs);
}

std::vector<std::vector<double>> prime_matrix(int q) {
  auto is_prime = [](int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d) {
      if (n % d == 0) return false;
    }
    return true;
  };
  std::vector<int> ns;
  for (int n = 2; static_cast<int>(ns.size()) < q; ++n) {
    if (is_prime(2 * n - 1)) ns.push_back(n);
  }
  std::vector<std::vector<double>> m(q, std::vector<double>(q, 0.0));
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) m[i][j] = double(ns[i] + ns[j] - 1);
  }
  return m;
}

int matrix_rank(std::vector<std::vector<double>> m, double tol) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  int rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t pivot = row;
    for (std::size_t r = row + 1; r < rows; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (std::abs(m[pivot][col]) <= tol) continue;
    std::swap(m[pivot], m[row]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row) continue;
      const double factor = m[r][col] / m[row][col];
      for (std::size_t cc = col; cc < cols; ++cc) m[r][cc] -= factor * m[row][cc];
    }
    ++row;
    ++rank;
  }
  return rank;
}

int sqrank_bruteforce(const std::vector<std::vector<double>>& m, double tol) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::vector<std::pair<std::size_t, std::size_t>> free_entries;
  std::vector<std::vector<double>> root(rows, std::vector<double>(cols, 0.0));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (m[i][j] < 0.0) throw ConfigError("square-root rank needs a nonnegative matrix");
      root[i][j] = std::sqrt(m[i][j]);
      if (m[i][j] > 0.0) free_entries.push_back({i, j});
    }
  }
  if (free_entries.size() > 16) {
    throw BudgetExceededError("square-root rank search limited to 16 nonzero entries");
  }
  int best = int(std::min(rows, cols));
  // The global sign flip preserves rank, so pin the first entry's sign.
  const std::uint32_t patterns = free_entries.empty() ? 1u : (1u << (free_entries.size() - 1));
  for (std::uint32_t p = 0; p < patterns; ++p) {
    auto b = root;
    for (std::size_t t = 1; t < free_entries.size(); ++t) {
      if ((p >> (t - 1)) & 1) {
        auto [i, j] = free_entries[t];
        b[i][j] = -b[i][j];
      }
    }
    best = std::min(best, matrix_rank(std::move(b), tol));
    if (best == 1) break;
  }
  return best;
}

std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> theta,
    double h) {
  std::vector<double> g(theta.size(), 0.0);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double orig = theta[i];
    theta[i] = orig + h;
    const double fp = f(theta);
    theta[i] = orig - h;
    const double fm = f(theta);
    theta[i] = orig;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
  if (n % 2 != 0) ++n;
  const double step = (hi - lo) / n;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) {
    acc += f(lo + i * step) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return acc * step / 3.0;
}

}  // namespace socs
