#include "socs/reductions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "socs/compose.hpp"
#include "socs/errors.hpp"
#include "socs/structure.hpp"

namespace socs {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

void MPS::validate() const {
  if (d < 2) throw ShapeError("matrix-product state needs d >= 2 sites");
  if (v < 1 || r < 1) throw ShapeError("matrix-product state needs positive v and r");
  if (static_cast<int>(tensors.size()) != d) throw ShapeError("expected d tensors");
  for (int j = 0; j < d; ++j) {
    const std::size_t expect =
        (j == 0 || j == d - 1) ? std::size_t(v) * r : std::size_t(v) * r * r;
    if (tensors[j].size() != expect) {
      throw ShapeError("tensor " + std::to_string(j) + " has wrong number of entries");
    }
    for (const Cplx& e : tensors[j]) {
      if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
        throw ShapeError("non-finite tensor entry");
      }
    }
  }
}

Cplx MPS::contract(const std::vector<int>& x) const {
  // Left-to-right vector-matrix contraction.
  std::vector<Cplx> vec(r);
  for (int a = 0; a < r; ++a) vec[a] = tensors[0][std::size_t(x[0]) * r + a];
  for (int j = 1; j < d - 1; ++j) {
    std::vector<Cplx> next(r, Cplx(0.0, 0.0));
    for (int a = 0; a < r; ++a) {
      for (int bb = 0; bb < r; ++bb) {
        next[bb] += vec[a] * tensors[j][(std::size_t(x[j]) * r + a) * r + bb];
      }
    }
    vec = std::move(next);
  }
  Cplx out(0.0, 0.0);
  for (int a = 0; a < r; ++a) out += vec[a] * tensors[d - 1][std::size_t(x[d - 1]) * r + a];
  return out;
}

Circuit mps_to_circuit(const MPS& m) {
  m.validate();
  std::vector<Variable> vars;
  for (int j = 0; j < m.d; ++j) {
    vars.push_back({"X" + std::to_string(j + 1), Domain::finite(m.v)});
  }
  auto table = std::make_shared<VariableTable>(std::move(vars));
  CircuitBuilder b(table, m.field);

  auto column_leaf = [&](int site, int a, int bb) {
    Embedding e;
    const bool edge = site == 0 || site == m.d - 1;
    for (int x = 0; x < m.v; ++x) {
      const Cplx entry = edge ? m.tensors[site][std::size_t(x) * m.r + a]
                              : m.tensors[site][(std::size_t(x) * m.r + a) * m.r + bb];
      e.re.push_back(ParamField::fixed(entry.real()));
      if (m.field == Field::Complex) e.im.push_back(ParamField::fixed(entry.imag()));
    }
    return b.add_input(site, InputFunction(e));
  };

  // tail[a] computes the contraction of sites j..d-1 given bond index a
  std::vector<UnitId> tail(m.r);
  for (int a = 0; a < m.r; ++a) tail[a] = column_leaf(m.d - 1, a, 0);
  for (int j = m.d - 2; j >= 1; --j) {
    std::vector<UnitId> next(m.r);
    for (int a = 0; a < m.r; ++a) {
      std::vector<UnitId> prods;
      std::vector<WeightExpr> ws;
      for (int bb = 0; bb < m.r; ++bb) {
        prods.push_back(b.add_product_canonical({column_leaf(j, a, bb), tail[bb]}));
        ws.push_back(WeightExpr::lit(1.0));
      }
      next[a] = b.add_sum(std::move(prods), std::move(ws));
    }
    tail = std::move(next);
  }
  std::vector<UnitId> prods;
  std::vector<WeightExpr> ws;
  for (int a = 0; a < m.r; ++a) {
    prods.push_back(b.add_product_canonical({column_leaf(0, a, 0), tail[a]}));
    ws.push_back(WeightExpr::lit(1.0));
  }
  return b.build(b.add_sum(std::move(prods), std::move(ws)));
}

Circuit born_machine(const MPS& m) { return square(mps_to_circuit(m)); }

namespace {

/// One Cayley-Dickson step: circuits (c1, c2) over the next-lower algebra
/// with c(x) = c1(x) + c2(x) * i_w. Tracks, for every source unit, the two
/// components and their conjugates so the recursion stays closed.
class DecomposeStep {
public:
  explicit DecomposeStep(const Circuit& c)
      : src_(c),
        src_order_(c.field() == Field::Complex ? 1 : c.hyper_order()),
        tgt_order_(src_order_ - 1),
        b_(c.var_table(),
           tgt_order_ == 0 ? Field::Real
           : tgt_order_ == 1 ? Field::Complex
                             : Field::Hypercomplex,
           tgt_order_ >= 2 ? tgt_order_ : 0) {}

  std::pair<Circuit, Circuit> run() {
    for (UnitId id : src_.topo_order()) emit(id);
    const auto& root = parts_[src_.output()];
    Circuit c1 = b_.build(root.p1);
    Circuit c2 = b_.build(root.p2);
    return {std::move(c1), std::move(c2)};
  }

private:
  struct Parts {
    UnitId p1, p2, p1d, p2d;  // components and their conjugates
  };
  struct Term {
    UnitId child;
    Hyper weight;
    bool right;
  };

  Hyper source_weight(const Unit& u, int k) const {
    if (src_.field() == Field::Complex) {
      return Hyper::from_complex(u.weights[k].value(nullptr), 1);
    }
    return u.hyper_weights[k];
  }

  UnitId sum_of(const std::vector<Term>& terms) {
    if (tgt_order_ <= 1) {
      std::vector<UnitId> ins;
      std::vector<WeightExpr> ws;
      for (const auto& t : terms) {
        ins.push_back(t.child);
        ws.push_back(WeightExpr::lit(t.weight.to_complex()));
      }
      return b_.add_sum(std::move(ins), std::move(ws));
    }
    std::vector<UnitId> ins;
    std::vector<Hyper> ws;
    std::vector<std::uint8_t> right;
    for (const auto& t : terms) {
      ins.push_back(t.child);
      ws.push_back(t.weight);
      right.push_back(t.right ? 1 : 0);
    }
    return b_.add_sum_hyper(std::move(ins), std::move(ws), std::move(right));
  }

  Hyper one() const { return Hyper::real(1.0, tgt_order_); }

  void emit(UnitId id) {
    const Unit& u = src_.unit(id);
    Parts out{};
    switch (u.kind) {
      case UnitKind::Input: {
        if (src_order_ == 1) {
          const Domain d = u.var >= 0 ? src_.var_table()->at(u.var).domain : Domain::boolean();
          auto [re, im] = split_re_im(*u.fn, d);
          out.p1 = b_.add_input(u.var, re);
          out.p2 = b_.add_input(u.var, im);
          out.p1d = out.p1;  // real functions are self-conjugate
          out.p2d = out.p2;
        } else {
          // complex-valued leaf embedded in the lower algebra: second
          // component is zero
          out.p1 = b_.add_input(u.var, u.fn);
          out.p1d = b_.add_input(u.var, std::make_shared<InputFunction>(u.fn->conjugate()));
          const Domain d = u.var >= 0 ? src_.var_table()->at(u.var).domain : Domain::boolean();
          const UnitId z = u.var >= 0 ? b_.add_input(u.var, zero_leaf(d))
                                      : b_.add_constant(Cplx(0.0, 0.0));
          out.p2 = z;
          out.p2d = z;
        }
        break;
      }
      case UnitKind::Sum: {
        std::vector<Term> t1, t2, t1d, t2d;
        for (int k = 0; k < u.fan_in(); ++k) {
          const Parts& mp = parts_[u.inputs[k]];
          const Hyper w = source_weight(u, k);
          const Hyper w1 = w.first_half();
          const Hyper w2 = w.second_half();
          const bool right =
              !u.weight_on_right.empty() && u.weight_on_right[k] != 0;
          if (!right) {
            // (theta * m): components of the Cayley-Dickson product with the
            // weight on the left
            t1.push_back({mp.p1, w1, false});
            t1.push_back({mp.p2d, -w2, true});
            t2.push_back({mp.p2, w1, true});
            t2.push_back({mp.p1d, w2, false});
            t1d.push_back({mp.p1d, w1.conj(), true});
            t1d.push_back({mp.p2, -w2.conj(), false});
            t2d.push_back({mp.p2d, w1.conj(), false});
            t2d.push_back({mp.p1, w2.conj(), true});
          } else {
            // (m * theta)
            t1.push_back({mp.p1, w1, true});
            t1.push_back({mp.p2, -w2.conj(), false});
            t2.push_back({mp.p1, w2, false});
            t2.push_back({mp.p2, w1.conj(), true});
            t1d.push_back({mp.p1d, w1.conj(), false});
            t1d.push_back({mp.p2d, -w2, true});
            t2d.push_back({mp.p1d, w2.conj(), true});
            t2d.push_back({mp.p2d, w1, false});
          }
        }
        out.p1 = sum_of(t1);
        out.p2 = sum_of(t2);
        out.p1d = sum_of(t1d);
        out.p2d = sum_of(t2d);
        break;
      }
      case UnitKind::Product: {
        const Parts& rp = parts_[u.inputs[0]];
        const Parts& sp = parts_[u.inputs[1]];
        auto prod = [&](UnitId x, UnitId y) { return b_.add_product({x, y}); };
        // (r1, r2)(s1, s2) = (r1 s1 - s2^d r2, s2 r1 + r2 s1^d)
        out.p1 = sum_of({{prod(rp.p1, sp.p1), one(), false},
                         {prod(sp.p2d, rp.p2), -one(), false}});
        out.p2 = sum_of({{prod(sp.p2, rp.p1), one(), false},
                         {prod(rp.p2, sp.p1d), one(), false}});
        out.p1d = sum_of({{prod(sp.p1d, rp.p1d), one(), false},
                          {prod(rp.p2d, sp.p2), -one(), false}});
        out.p2d = sum_of({{prod(rp.p1d, sp.p2d), one(), false},
                          {prod(sp.p1, rp.p2d), one(), false}});
        break;
      }
    }
    parts_[id] = out;
  }

  const Circuit& src_;
  int src_order_;
  int tgt_order_;
  CircuitBuilder b_;
  std::unordered_map<UnitId, Parts> parts_;
};

}  // namespace

std::vector<Circuit> hypercomplex_decompose(const Circuit& c) {
  if (c.field() == Field::Real) return {c};
  auto [c1, c2] = DecomposeStep(c).run();
  std::vector<Circuit> out = hypercomplex_decompose(c1);
  std::vector<Circuit> second = hypercomplex_decompose(c2);
  out.insert(out.end(), std::make_move_iterator(second.begin()),
             std::make_move_iterator(second.end()));
  return out;
}

Cplx PSDModel::eval(const Assignment& x) const {
  const std::size_t r = components.size();
  std::vector<Cplx> v(r);
  for (std::size_t i = 0; i < r; ++i) v[i] = evaluate(components[i], x, EvalMode::Linear);
  Cplx out(0.0, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) out += v[i] * matrix[i][j] * v[j];
  }
  return out;
}

Circuit psd_to_socs(const PSDModel& p) {
  const int r = static_cast<int>(p.components.size());
  if (r == 0) throw ConfigError("PSD model needs at least one component");
  if (static_cast<int>(p.matrix.size()) != r) throw ShapeError("PSD matrix must be r x r");
  Eigen::MatrixXd A(r, r);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(p.matrix[i].size()) != r) throw ShapeError("PSD matrix must be r x r");
    for (int j = 0; j < r; ++j) A(i, j) = p.matrix[i][j];
  }
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ShapeError("PSD matrix must be symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
  std::vector<Circuit> combos;
  std::vector<double> lambdas;
  for (int i = 0; i < r; ++i) {
    const double lam = eig.eigenvalues()(i);
    if (lam < -1e-10) {
      throw NotPsdError("matrix has eigenvalue " + std::to_string(lam));
    }
    if (lam <= 0.0) continue;  // eigenvalues in [-1e-10, 0] are clipped away
    CircuitBuilder b(p.components[0].var_table(),
                     p.components[0].field() == Field::Complex ? Field::Complex : Field::Real);
    std::vector<UnitId> ins;
    std::vector<WeightExpr> ws;
    // import every component and take the w_i-weighted combination
    for (int j = 0; j < r; ++j) {
      std::vector<UnitId> remap(p.components[j].num_units());
      for (UnitId id : p.components[j].topo_order()) {
        const Unit& u = p.components[j].unit(id);
        switch (u.kind) {
          case UnitKind::Input:
            remap[id] = b.add_input(u.var, u.fn);
            break;
          case UnitKind::Sum: {
            std::vector<UnitId> cin;
            for (UnitId cc : u.inputs) cin.push_back(remap[cc]);
            remap[id] = b.add_sum(std::move(cin), u.weights);
            break;
          }
          case UnitKind::Product:
            remap[id] = b.add_product({remap[u.inputs[0]], remap[u.inputs[1]]});
            break;
        }
      }
      ins.push_back(remap[p.components[j].output()]);
      ws.push_back(WeightExpr::lit(eig.eigenvectors()(j, i)));
    }
    combos.push_back(b.build(b.add_sum(std::move(ins), std::move(ws))));
    lambdas.push_back(lam);
  }
  if (combos.empty()) {
    // the zero function: a single all-zero-weight combination
    CircuitBuilder b(p.components[0].var_table(), Field::Real);
    // reuse the first component scaled by zero
    std::vector<Circuit> single{p.components[0]};
    return socs_sum(single, {0.0});
  }
  return socs_sum(combos, std::move(lambdas));
}

PSDModel socs_to_psd(const Circuit& socs) {
  const auto& info = socs.socs_structure();
  if (info == nullptr) {
    throw ConfigError("circuit does not carry a sum-of-squares record");
  }
  PSDModel p;
  p.components = info->components;
  const std::size_t r = p.components.size();
  p.matrix.assign(r, std::vector<double>(r, 0.0));
  for (std::size_t i = 0; i < r; ++i) p.matrix[i][i] = info->coefficients[i];
  return p;
}

void SnefySpec::validate() const {
  if (sigma != Sigma::Exp && sigma != Sigma::Cos) throw ConfigError("sigma must be exp or cos");
  if (V.empty() || V[0].empty()) throw ConfigError("V must be R x S with R, S >= 1");
  const std::size_t R = V.size(), S = V[0].size();
  for (const auto& row : V) {
    if (row.size() != S) throw ConfigError("ragged V");
  }
  if (b.size() != S) throw ConfigError("b must have S entries");
  if (W.size() != S) throw ConfigError("W must be S x C");
  std::size_t C = 0;
  for (std::size_t u = 0; u < vars.size(); ++u) {
    const auto& v = vars[u];
    if (v.finite) {
      if (v.cardinality < 1 || static_cast<int>(v.mu_weights.size()) != v.cardinality ||
          static_cast<int>(v.t.size()) != v.cardinality) {
        throw ConfigError("finite variable " + std::to_string(u) + " has inconsistent tables");
      }
      for (double mw : v.mu_weights) {
        if (mw < 0.0) throw ConfigError("base measure weights must be nonnegative");
      }
      for (const auto& row : v.t) {
        if (row.size() != v.t[0].size()) throw ConfigError("ragged statistic table");
      }
      C += v.t[0].size();
    } else {
      if (!(v.mu_stddev > 0.0)) throw ConfigError("base measure stddev must be positive");
      C += 1;
    }
  }
  for (const auto& row : W) {
    if (row.size() != C) throw ConfigError("W columns must total the statistic dimensions");
  }
  (void)R;
}

VariableTablePtr SnefySpec::variable_table() const {
  std::vector<Variable> vs;
  for (std::size_t u = 0; u < vars.size(); ++u) {
    vs.push_back({"X" + std::to_string(u + 1),
                  vars[u].finite ? Domain::finite(vars[u].cardinality) : Domain::real_line()});
  }
  return std::make_shared<VariableTable>(std::move(vs));
}

double SnefySpec::direct(const Assignment& x) const {
  const std::size_t R = V.size(), S = V[0].size();
  double mu = 1.0;
  std::vector<double> pre(S, 0.0);  // sum_r w_jr t(x)_r + b_j
  std::size_t col = 0;
  for (std::size_t u = 0; u < vars.size(); ++u) {
    const auto& v = vars[u];
    if (v.finite) {
      const int code = static_cast<int>(x[u]);
      mu *= v.mu_weights[code];
      for (std::size_t r = 0; r < v.t[0].size(); ++r) {
        for (std::size_t j = 0; j < S; ++j) pre[j] += W[j][col + r] * v.t[code][r];
      }
      col += v.t[0].size();
    } else {
      const double z = (x[u] - v.mu_mean) / v.mu_stddev;
      mu *= std::exp(-0.5 * z * z - std::log(v.mu_stddev) - 0.5 * kLog2Pi);
      for (std::size_t j = 0; j < S; ++j) pre[j] += W[j][col] * x[u];
      col += 1;
    }
  }
  double total = 0.0;
  for (std::size_t k = 0; k < R; ++k) {
    double inner = 0.0;
    for (std::size_t j = 0; j < S; ++j) {
      const double act = sigma == Sigma::Exp ? std::exp(pre[j] + b[j]) : std::cos(pre[j] + b[j]);
      inner += V[k][j] * act;
    }
    total += inner * inner;
  }
  return mu * total;
}

namespace {

/// Leaf sqrt(mu_u(x)) * exp(scale * sum_r w_r t_u(x)_r) for one variable.
InputFunction snefy_leaf(const SnefySpec::Var& v, const double* w_cols, Cplx scale) {
  if (v.finite) {
    Embedding e;
    bool complex_entries = scale.imag() != 0.0;
    for (int code = 0; code < v.cardinality; ++code) {
      Cplx tilt(0.0, 0.0);
      for (std::size_t r = 0; r < v.t[0].size(); ++r) tilt += scale * w_cols[r] * v.t[code][r];
      const Cplx entry = std::sqrt(v.mu_weights[code]) * std::exp(tilt);
      e.re.push_back(ParamField::fixed(entry.real()));
      if (complex_entries) e.im.push_back(ParamField::fixed(entry.imag()));
    }
    if (!e.im.empty() && e.im.size() != e.re.size()) {
      e.im.resize(e.re.size(), ParamField::fixed(0.0));
    }
    return InputFunction(e);
  }
  // sqrt(N(x | m, s)) * exp(scale * w * x) as exp(-a x^2 + b x + c)
  const double s2 = v.mu_stddev * v.mu_stddev;
  ExpQuad q;
  q.a = 1.0 / (4.0 * s2);
  q.b = Cplx(v.mu_mean / (2.0 * s2), 0.0) + scale * w_cols[0];
  q.c = Cplx(-v.mu_mean * v.mu_mean / (4.0 * s2) -
                 0.25 * (kLog2Pi + 2.0 * std::log(v.mu_stddev)),
             0.0);
  return InputFunction(q);
}

}  // namespace

Circuit snefy_to_socs(const SnefySpec& s) {
  s.validate();
  const std::size_t R = s.V.size(), S = s.V[0].size();
  auto table = s.variable_table();
  const bool cos_case = s.sigma == SnefySpec::Sigma::Cos;

  // Per (j, tilt sign) factorized product over variables.
  auto make_term = [&](CircuitBuilder& b, std::size_t j, Cplx scale) {
    std::vector<UnitId> leaves;
    std::size_t col = 0;
    for (std::size_t u = 0; u < s.vars.size(); ++u) {
      const int cu = s.c_u(u);
      std::vector<double> w_cols(s.W[j].begin() + col, s.W[j].begin() + col + cu);
      leaves.push_back(b.add_input(static_cast<int>(u),
                                   snefy_leaf(s.vars[u], w_cols.data(), scale)));
      col += cu;
    }
    return b.add_product_canonical(std::move(leaves));
  };

  std::vector<Circuit> components;
  for (std::size_t k = 0; k < R; ++k) {
    CircuitBuilder b(table, cos_case ? Field::Complex : Field::Real);
    std::vector<UnitId> ins;
    std::vector<WeightExpr> ws;
    if (!cos_case) {
      for (std::size_t j = 0; j < S; ++j) {
        ins.push_back(make_term(b, j, Cplx(1.0, 0.0)));
        ws.push_back(WeightExpr::lit(s.V[k][j] * std::exp(s.b[j])));
      }
    } else {
      for (std::size_t j = 0; j < S; ++j) {
        ins.push_back(make_term(b, j, Cplx(0.0, 1.0)));
        ws.push_back(WeightExpr::lit(0.5 * s.V[k][j] * std::exp(Cplx(0.0, s.b[j]))));
        ins.push_back(make_term(b, j, Cplx(0.0, -1.0)));
        ws.push_back(WeightExpr::lit(0.5 * s.V[k][j] * std::exp(Cplx(0.0, -s.b[j]))));
      }
    }
    components.push_back(b.build(b.add_sum(std::move(ins), std::move(ws))));
  }

  if (!cos_case) return socs_sum(components);

  // cos case: the components compute real functions, so the square is a
  // plain self-product without conjugation.
  CircuitBuilder b(table, Field::Complex);
  std::vector<UnitId> roots;
  std::vector<WeightExpr> ws;
  for (const Circuit& comp : components) {
    const Circuit sq = multiply(comp, comp);
    std::vector<UnitId> remap(sq.num_units());
    for (UnitId id : sq.topo_order()) {
      const Unit& u = sq.unit(id);
      switch (u.kind) {
        case UnitKind::Input:
          remap[id] = b.add_input(u.var, u.fn);
          break;
        case UnitKind::Sum: {
          std::vector<UnitId> cin;
          for (UnitId cc : u.inputs) cin.push_back(remap[cc]);
          remap[id] = b.add_sum(std::move(cin), u.weights);
          break;
        }
        case UnitKind::Product:
          remap[id] = b.add_product({remap[u.inputs[0]], remap[u.inputs[1]]});
          break;
      }
    }
    roots.push_back(remap[sq.output()]);
    ws.push_back(WeightExpr::lit(1.0));
  }
  return b.build(b.add_sum(std::move(roots), std::move(ws)));
}

namespace {

struct UnrollTerm {
  double coeff = 1.0;
  std::vector<std::pair<int, int>> leaves;  // (variable, indicator value), sorted
};

}  // namespace

Circuit unroll_to_sos(const Circuit& c, std::size_t max_terms) {
  if (!check_monotone(c)) throw MonotonicityError("unrolling requires a monotone circuit");
  if (!structured_decomposable(c)) {
    throw StructureError("unrolling requires a structured-decomposable circuit");
  }
  for (UnitId id : c.topo_order()) {
    const Unit& u = c.unit(id);
    if (u.kind == UnitKind::Input && !std::holds_alternative<Indicator>(u.fn->fn)) {
      throw ConfigError("unrolling requires indicator leaves");
    }
  }

  std::vector<std::vector<UnrollTerm>> memo(c.num_units());
  for (UnitId id : c.topo_order()) {
    const Unit& u = c.unit(id);
    std::vector<UnrollTerm>& terms = memo[id];
    switch (u.kind) {
      case UnitKind::Input: {
        UnrollTerm t;
        t.leaves = {{u.var, std::get<Indicator>(u.fn->fn).value}};
        terms.push_back(std::move(t));
        break;
      }
      case UnitKind::Sum: {
        for (int k = 0; k < u.fan_in(); ++k) {
          const double w = u.weights[k].value(nullptr).real();
          for (const auto& t : memo[u.inputs[k]]) {
            UnrollTerm nt = t;
            nt.coeff *= w;
            terms.push_back(std::move(nt));
            if (terms.size() > max_terms) {
              throw BudgetExceededError("induced sub-circuit count exceeds " +
                                        std::to_string(max_terms));
            }
          }
        }
        break;
      }
      case UnitKind::Product: {
        for (const auto& ta : memo[u.inputs[0]]) {
          for (const auto& tb : memo[u.inputs[1]]) {
            UnrollTerm nt;
            nt.coeff = ta.coeff * tb.coeff;
            nt.leaves = ta.leaves;
            nt.leaves.insert(nt.leaves.end(), tb.leaves.begin(), tb.leaves.end());
            std::sort(nt.leaves.begin(), nt.leaves.end());
            terms.push_back(std::move(nt));
            if (terms.size() > max_terms) {
              throw BudgetExceededError("induced sub-circuit count exceeds " +
                                        std::to_string(max_terms));
            }
          }
        }
        break;
      }
    }
  }

  const auto& root_terms = memo[c.output()];
  std::vector<Circuit> components;
  components.reserve(root_terms.size());
  for (const auto& t : root_terms) {
    CircuitBuilder b(c.var_table(), Field::Real);
    std::vector<UnitId> leaves;
    for (const auto& [var, val] : t.leaves) {
      leaves.push_back(b.add_input(var, InputFunction(Indicator{val})));
    }
    const UnitId prod = b.add_product_canonical(std::move(leaves));
    const UnitId root = b.add_sum({prod}, {WeightExpr::lit(std::sqrt(t.coeff))});
    components.push_back(b.build(root));
  }
  return socs_sum(components);
}

}  // namespace socs
