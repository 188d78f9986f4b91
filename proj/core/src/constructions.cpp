#include "socs/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "socs/compose.hpp"
#include "socs/errors.hpp"

namespace socs {

void GraphSpec::validate() const {
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u == v) throw ConfigError("graph has a self-loop");
    if (u < 0 || v < 0 || u >= vertices || v >= vertices) {
      throw ConfigError("edge endpoint out of range");
    }
    auto key = std::minmax(u, v);
    if (!seen.insert({key.first, key.second}).second) {
      throw ConfigError("duplicate edge");
    }
  }
}

GraphSpec GraphSpec::path(int n) {
  GraphSpec g;
  g.vertices = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1});
  return g;
}

VariableTablePtr udisj_variables(const GraphSpec& g) {
  return boolean_variables(g.vertices, "X");
}

VariableTablePtr sum_function_variables(int k) {
  std::vector<Variable> vars;
  for (int i = 0; i < k; ++i) vars.push_back({"X" + std::to_string(i + 1), Domain::boolean()});
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      vars.push_back(
          {"X" + std::to_string(i + 1) + "_" + std::to_string(j + 1), Domain::boolean()});
    }
  }
  return std::make_shared<VariableTable>(std::move(vars));
}

VariableTablePtr ups_variables(const GraphSpec& g) {
  const int n = g.vertices;
  std::vector<Variable> vars;
  for (int v = 0; v < n; ++v) vars.push_back({"X" + std::to_string(v + 1), Domain::boolean()});
  for (int v = 0; v < n; ++v) {
    for (int j = 0; j < n; ++j) {
      vars.push_back(
          {"X" + std::to_string(v + 1) + "_" + std::to_string(j + 1), Domain::boolean()});
    }
  }
  vars.push_back({"Z1", Domain::boolean()});
  vars.push_back({"Z2", Domain::boolean()});
  return std::make_shared<VariableTable>(std::move(vars));
}

int ups_z1_index(const GraphSpec& g) { return g.vertices + g.vertices * g.vertices; }
int ups_z2_index(const GraphSpec& g) { return ups_z1_index(g) + 1; }

VariableTablePtr motzkin_variables(int d) {
  std::vector<Variable> vars;
  vars.push_back({"X1", Domain::real_line()});
  vars.push_back({"X2", Domain::real_line()});
  for (int i = 0; i < d; ++i) vars.push_back({"Y" + std::to_string(i + 1), Domain::real_line()});
  return std::make_shared<VariableTable>(std::move(vars));
}

double eval_udisj(const GraphSpec& g, const Assignment& x) {
  double s = 0.0;
  for (auto [u, v] : g.edges) s += x[u] * x[v];
  return (1.0 - s) * (1.0 - s);
}

double eval_sum_function(int k, const Assignment& x) {
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    double inner = 0.0;
    for (int j = 0; j < k; ++j) inner += std::ldexp(1.0, j) * x[k + i * k + j];
    total += x[i] * inner;
  }
  return total;
}

double eval_udisj_plus_sum(const GraphSpec& g, const Assignment& x) {
  const int n = g.vertices;
  double s = 0.0;
  for (auto [u, v] : g.edges) s += x[u] * x[v];
  double sum_part = 0.0;
  for (int v = 0; v < n; ++v) {
    double inner = 0.0;
    for (int j = 0; j < n; ++j) inner += std::ldexp(1.0, j) * x[n + v * n + j];
    sum_part += x[v] * inner;
  }
  return x[ups_z1_index(g)] * (1.0 - s) * (1.0 - s) + x[ups_z2_index(g)] * sum_part;
}

double eval_udisj_times_quadratic(const GraphSpec& g, const Assignment& x) {
  double s = 0.0;
  for (auto [u, v] : g.edges) s += x[u] * x[v];
  return (1.0 - s) * (1.0 - s) * (1.0 + s);
}

double motzkin_polynomial(double x1, double x2) {
  const double a = x1 * x1, b = x2 * x2;
  return 1.0 + a * a * b + a * b * b - 3.0 * a * b;
}

double eval_motzkin_extension(int d, const Assignment& x) {
  double total = motzkin_polynomial(x[0], x[1]);
  for (int i = 0; i < d; ++i) total += x[2 + i] * x[2 + i];
  return total;
}

namespace {

/// Full-scope product term over Boolean variables: indicators force the
/// listed variables to 1; every other variable gets a shared constant-one
/// gadget so all terms are smooth and identically factorized.
class TermFactory {
public:
  TermFactory(CircuitBuilder& b, int num_vars) : b_(b), num_vars_(num_vars) {}

  UnitId gadget(int var) {
    if (gadgets_.empty()) gadgets_.assign(num_vars_, -1);
    if (gadgets_[var] < 0) {
      const UnitId i1 = b_.add_input(var, InputFunction(Indicator{1}));
      const UnitId i0 = b_.add_input(var, InputFunction(Indicator{0}));
      gadgets_[var] = b_.add_sum({i1, i0}, {WeightExpr::lit(1.0), WeightExpr::lit(1.0)});
    }
    return gadgets_[var];
  }

  UnitId term(const std::vector<int>& ones) {
    std::vector<char> is_one(num_vars_, 0);
    for (int v : ones) is_one[v] = 1;
    std::vector<UnitId> parts;
    parts.reserve(num_vars_);
    for (int v = 0; v < num_vars_; ++v) {
      parts.push_back(is_one[v] ? b_.add_input(v, InputFunction(Indicator{1})) : gadget(v));
    }
    return b_.add_product_canonical(std::move(parts));
  }

private:
  CircuitBuilder& b_;
  int num_vars_;
  std::vector<UnitId> gadgets_;
};

/// One-square component: weight * (product of indicators at `ones`, smoothed
/// over the full table).
Circuit indicator_square_component(const VariableTablePtr& vars, const std::vector<int>& ones,
                                   double weight) {
  CircuitBuilder b(vars, Field::Real);
  TermFactory tf(b, vars->size());
  return b.build(b.add_sum({tf.term(ones)}, {WeightExpr::lit(weight)}));
}

}  // namespace

Circuit build_udisj(const GraphSpec& g) {
  g.validate();
  auto vars = udisj_variables(g);
  CircuitBuilder b(vars, Field::Real);
  TermFactory tf(b, g.vertices);
  std::vector<UnitId> ins{tf.term({})};
  std::vector<WeightExpr> ws{WeightExpr::lit(1.0)};
  for (auto [u, v] : g.edges) {
    ins.push_back(tf.term({u, v}));
    ws.push_back(WeightExpr::lit(-1.0));
  }
  const Circuit inner = b.build(b.add_sum(std::move(ins), std::move(ws)));
  return square(inner);
}

Circuit build_sum_function(int k) {
  if (k < 1) throw ConfigError("sum function needs k >= 1");
  auto vars = sum_function_variables(k);
  const int n = vars->size();
  CircuitBuilder b(vars, Field::Real);
  TermFactory tf(b, n);

  // X' part of term i: indicator on X_i, gadgets on the other X'.
  auto xprime_part = [&](int i) {
    std::vector<UnitId> parts;
    for (int v = 0; v < k; ++v) {
      parts.push_back(v == i ? b.add_input(v, InputFunction(Indicator{1})) : tf.gadget(v));
    }
    return b.add_product_canonical(std::move(parts));
  };
  // X'' term with the indicator at (i, j), gadgets elsewhere.
  auto xsecond_term = [&](int i, int j) {
    std::vector<UnitId> parts;
    for (int v = k; v < n; ++v) {
      parts.push_back(v == k + i * k + j ? b.add_input(v, InputFunction(Indicator{1}))
                                         : tf.gadget(v));
    }
    return b.add_product_canonical(std::move(parts));
  };

  std::vector<UnitId> terms;
  std::vector<WeightExpr> ws;
  for (int i = 0; i < k; ++i) {
    std::vector<UnitId> inner_terms;
    std::vector<WeightExpr> inner_ws;
    for (int j = 0; j < k; ++j) {
      inner_terms.push_back(xsecond_term(i, j));
      inner_ws.push_back(WeightExpr::lit(std::ldexp(1.0, j)));
    }
    const UnitId inner = b.add_sum(std::move(inner_terms), std::move(inner_ws));
    terms.push_back(b.add_product_canonical({xprime_part(i), inner}));
    ws.push_back(WeightExpr::lit(1.0));
  }
  return b.build(b.add_sum(std::move(terms), std::move(ws)));
}

Circuit build_sum_function_sos(int k) {
  if (k < 1) throw ConfigError("sum function needs k >= 1");
  auto vars = sum_function_variables(k);
  std::vector<Circuit> comps;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      comps.push_back(indicator_square_component(vars, {i, k + i * k + j},
                                                 std::sqrt(std::ldexp(1.0, j))));
    }
  }
  return socs_sum(comps);
}

Circuit build_udisj_plus_sum(const GraphSpec& g) {
  g.validate();
  auto vars = ups_variables(g);
  const int n = g.vertices;
  const int z1 = ups_z1_index(g), z2 = ups_z2_index(g);

  // First square: Z1 - sum_{uv} Z1 X_u X_v (idempotency folds Z1^2 = Z1).
  std::vector<Circuit> comps;
  {
    CircuitBuilder b(vars, Field::Real);
    TermFactory tf(b, vars->size());
    std::vector<UnitId> ins{tf.term({z1})};
    std::vector<WeightExpr> ws{WeightExpr::lit(1.0)};
    for (auto [u, v] : g.edges) {
      ins.push_back(tf.term({z1, u, v}));
      ws.push_back(WeightExpr::lit(-1.0));
    }
    comps.push_back(b.build(b.add_sum(std::move(ins), std::move(ws))));
  }
  // |V|^2 squares: sqrt(2^(j-1)) Z2 X_v X_{v,j}.
  for (int v = 0; v < n; ++v) {
    for (int j = 0; j < n; ++j) {
      comps.push_back(indicator_square_component(vars, {z2, v, n + v * n + j},
                                                 std::sqrt(std::ldexp(1.0, j))));
    }
  }
  return socs_sum(comps);
}

Circuit build_udisj_times_quadratic(const GraphSpec& g) {
  g.validate();
  auto vars = udisj_variables(g);

  std::vector<Circuit> comps;
  // (1 - sum X_u X_v) and, per edge, X_u X_v (1 - sum X_u' X_v').
  auto inner_sum = [&](CircuitBuilder& b, TermFactory& tf, const std::vector<int>& extra) {
    std::vector<UnitId> ins{tf.term(extra)};
    std::vector<WeightExpr> ws{WeightExpr::lit(1.0)};
    for (auto [u, v] : g.edges) {
      std::vector<int> ones = extra;
      ones.push_back(u);
      ones.push_back(v);
      std::sort(ones.begin(), ones.end());
      ones.erase(std::unique(ones.begin(), ones.end()), ones.end());
      ins.push_back(tf.term(ones));
      ws.push_back(WeightExpr::lit(-1.0));
    }
    return b.add_sum(std::move(ins), std::move(ws));
  };

  {
    CircuitBuilder b(vars, Field::Real);
    TermFactory tf(b, g.vertices);
    comps.push_back(b.build(inner_sum(b, tf, {})));
  }
  for (auto [u, v] : g.edges) {
    CircuitBuilder b(vars, Field::Real);
    TermFactory tf(b, g.vertices);
    std::vector<int> extra{u, v};
    std::sort(extra.begin(), extra.end());
    comps.push_back(b.build(inner_sum(b, tf, extra)));
  }
  return socs_sum(comps);
}

Circuit build_motzkin_extension(int d) {
  if (d < 0) throw ConfigError("motzkin extension needs d >= 0");
  auto vars = motzkin_variables(d);
  const int n = vars->size();
  CircuitBuilder b(vars, Field::Real);

  auto power_leaf = [&](int var, int degree) {
    std::vector<double> coeffs(degree + 1, 0.0);
    coeffs[degree] = 1.0;
    return b.add_input(var, InputFunction(Polynomial{std::move(coeffs), false, 0.0, 0.0}));
  };
  // term: X1^d1 * X2^d2 * Y_i^dy, constant-1 polynomials elsewhere
  auto term = [&](int d1, int d2, int yi, int dy) {
    std::vector<UnitId> parts;
    for (int v = 0; v < n; ++v) {
      int deg = 0;
      if (v == 0) deg = d1;
      if (v == 1) deg = d2;
      if (yi >= 0 && v == 2 + yi) deg = dy;
      parts.push_back(power_leaf(v, deg));
    }
    return b.add_product_canonical(std::move(parts));
  };

  std::vector<UnitId> ins{term(0, 0, -1, 0), term(4, 2, -1, 0), term(2, 4, -1, 0),
                          term(2, 2, -1, 0)};
  std::vector<WeightExpr> ws{WeightExpr::lit(1.0), WeightExpr::lit(1.0), WeightExpr::lit(1.0),
                             WeightExpr::lit(-3.0)};
  for (int i = 0; i < d; ++i) {
    ins.push_back(term(0, 0, i, 2));
    ws.push_back(WeightExpr::lit(1.0));
  }
  return b.build(b.add_sum(std::move(ins), std::move(ws)));
}

}  // namespace socs
