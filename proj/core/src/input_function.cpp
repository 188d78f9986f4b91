#include "socs/input_function.hpp"

#include <cmath>

#include "socs/errors.hpp"

namespace socs {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

int code_of(const Domain& d, double x) {
  const double r = std::nearbyint(x);
  if (r != x || r < 0 || r >= d.cardinality) {
    throw DomainError("assignment value outside finite domain");
  }
  return static_cast<int>(r);
}

/// Flattens nested products into ground factors.
void flatten(const InputFunction& f, std::vector<const InputFunction*>& out) {
  if (const auto* p = std::get_if<ProductOf>(&f.fn)) {
    flatten(*p->lhs, out);
    flatten(*p->rhs, out);
  } else {
    out.push_back(&f);
  }
}

Cplx integrate_finite_factors(const std::vector<const InputFunction*>& fs, const Domain& d,
                              const double* theta) {
  Cplx total(0.0, 0.0);
  for (int v = 0; v < d.cardinality; ++v) {
    Cplx term(1.0, 0.0);
    for (const auto* f : fs) term *= f->eval(d, v, theta);
    total += term;
  }
  return total;
}

struct QuadForm {
  double a = 0.0;
  Cplx b{0.0, 0.0};
  Cplx c{0.0, 0.0};
};

QuadForm accumulate_gauss(const std::vector<const InputFunction*>& fs, const double* theta) {
  QuadForm q;
  for (const auto* f : fs) {
    if (const auto* g = std::get_if<Gaussian>(&f->fn)) {
      const double mu = g->mean.get(theta);
      const double sigma = std::exp(g->log_stddev.get(theta));
      const double lam = 1.0 / (sigma * sigma);
      q.a += 0.5 * lam;
      q.b += mu * lam;
      q.c += -0.5 * mu * mu * lam - 0.5 * (kLog2Pi + 2.0 * g->log_stddev.get(theta));
    } else if (const auto* e = std::get_if<ExpQuad>(&f->fn)) {
      q.a += e->a;
      q.b += e->b;
      q.c += e->c;
    } else {
      throw UnsupportedPairError("mixed leaf families in a Gaussian-type product");
    }
  }
  return q;
}

Cplx integrate_quadform(const QuadForm& q) {
  if (!(q.a > 0.0)) {
    throw UnsupportedPairError("divergent Gaussian-type integral (nonpositive quadratic coefficient)");
  }
  // int exp(-a x^2 + b x + c) dx = sqrt(pi/a) exp(b^2/(4a) + c)
  const Cplx expo = q.b * q.b / (4.0 * q.a) + q.c;
  return std::sqrt(M_PI / q.a) * std::exp(expo);
}

Polynomial combine_polys(const std::vector<const InputFunction*>& fs, const Domain& d) {
  Polynomial acc;
  acc.coeffs = {1.0};
  for (const auto* f : fs) {
    const auto& p = std::get<Polynomial>(f->fn);
    std::vector<double> conv(acc.coeffs.size() + p.coeffs.size() - 1, 0.0);
    for (std::size_t i = 0; i < acc.coeffs.size(); ++i) {
      for (std::size_t j = 0; j < p.coeffs.size(); ++j) conv[i + j] += acc.coeffs[i] * p.coeffs[j];
    }
    acc.coeffs = std::move(conv);
    if (p.has_interval && !acc.has_interval) {
      acc.has_interval = true;
      acc.lo = p.lo;
      acc.hi = p.hi;
    }
  }
  if (!acc.has_interval && d.kind == Domain::Kind::Interval) {
    acc.has_interval = true;
    acc.lo = d.lo;
    acc.hi = d.hi;
  }
  return acc;
}

double integrate_poly(const Polynomial& p) {
  if (!p.has_interval) {
    throw UnsupportedPairError("polynomial leaf without a bounded interval is evaluate-only");
  }
  double total = 0.0;
  double lo_pow = p.lo, hi_pow = p.hi;
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
    total += p.coeffs[k] * (hi_pow - lo_pow) / double(k + 1);
    lo_pow *= p.lo;
    hi_pow *= p.hi;
  }
  return total;
}

}  // namespace

Cplx InputFunction::eval(const Domain& d, double x, const double* theta) const {
  return std::visit(
      [&](const auto& f) -> Cplx {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Indicator>) {
          return code_of(d, x) == f.value ? Cplx(1.0, 0.0) : Cplx(0.0, 0.0);
        } else if constexpr (std::is_same_v<T, Categorical>) {
          return Cplx(f.probs.at(code_of(d, x)).get(theta), 0.0);
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          const double mu = f.mean.get(theta);
          const double ls = f.log_stddev.get(theta);
          const double z = (x - mu) * std::exp(-ls);
          return Cplx(std::exp(-0.5 * z * z - ls - 0.5 * kLog2Pi), 0.0);
        } else if constexpr (std::is_same_v<T, Embedding>) {
          const int v = code_of(d, x);
          const double re = f.re.at(v).get(theta);
          const double im = f.im.empty() ? 0.0 : f.im.at(v).get(theta);
          return Cplx(re, f.conjugated ? -im : im);
        } else if constexpr (std::is_same_v<T, Polynomial>) {
          double acc = 0.0;
          for (std::size_t k = f.coeffs.size(); k-- > 0;) acc = acc * x + f.coeffs[k];
          return Cplx(acc, 0.0);
        } else if constexpr (std::is_same_v<T, ConstantFn>) {
          return f.value;
        } else if constexpr (std::is_same_v<T, ExpQuad>) {
          return std::exp(Cplx(-f.a * x * x, 0.0) + f.b * x + f.c);
        } else {  // ProductOf
          return f.lhs->eval(d, x, theta) * f.rhs->eval(d, x, theta);
        }
      },
      fn);
}

LogComplex InputFunction::eval_log(const Domain& d, double x, const double* theta) const {
  if (const auto* g = std::get_if<Gaussian>(&fn)) {
    const double mu = g->mean.get(theta);
    const double ls = g->log_stddev.get(theta);
    const double z = (x - mu) * std::exp(-ls);
    return {-0.5 * z * z - ls - 0.5 * kLog2Pi, 0.0};
  }
  if (const auto* e = std::get_if<ExpQuad>(&fn)) {
    const Cplx expo = Cplx(-e->a * x * x, 0.0) + e->b * x + e->c;
    return {expo.real(), normalize_arg(expo.imag())};
  }
  if (const auto* p = std::get_if<ProductOf>(&fn)) {
    return log_mul(p->lhs->eval_log(d, x, theta), p->rhs->eval_log(d, x, theta));
  }
  return log_complex(eval(d, x, theta));
}

Cplx InputFunction::integrate(const Domain& d, const double* theta) const {
  if (const auto* c = std::get_if<ConstantFn>(&fn)) return c->value;

  std::vector<const InputFunction*> fs;
  flatten(*this, fs);

  const LeafClass cls = fs.front()->leaf_class();
  for (const auto* f : fs) {
    if (f->leaf_class() != cls) {
      throw UnsupportedPairError("no closed-form integral for mixed leaf families");
    }
  }
  switch (cls) {
    case LeafClass::FiniteVector:
      return integrate_finite_factors(fs, d, theta);
    case LeafClass::GaussLike:
      return integrate_quadform(accumulate_gauss(fs, theta));
    case LeafClass::Poly:
      return Cplx(integrate_poly(combine_polys(fs, d)), 0.0);
    case LeafClass::Constant: {
      Cplx acc(1.0, 0.0);
      for (const auto* f : fs) acc *= std::get<ConstantFn>(f->fn).value;
      return acc;
    }
  }
  throw UnsupportedPairError("unreachable leaf class");
}

InputFunction InputFunction::conjugate() const {
  return std::visit(
      [&](const auto& f) -> InputFunction {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Embedding>) {
          Embedding e = f;
          if (!e.im.empty()) e.conjugated = !e.conjugated;
          return InputFunction(e);
        } else if constexpr (std::is_same_v<T, ConstantFn>) {
          return InputFunction(ConstantFn{std::conj(f.value)});
        } else if constexpr (std::is_same_v<T, ExpQuad>) {
          return InputFunction(ExpQuad{f.a, std::conj(f.b), std::conj(f.c)});
        } else if constexpr (std::is_same_v<T, ProductOf>) {
          auto l = std::make_shared<InputFunction>(f.lhs->conjugate());
          auto r = std::make_shared<InputFunction>(f.rhs->conjugate());
          return InputFunction(ProductOf{std::move(l), std::move(r)});
        } else {
          return *this;  // real-valued families are fixed by conjugation
        }
      },
      fn);
}

bool InputFunction::is_nonnegative(const double* theta) const {
  return std::visit(
      [&](const auto& f) -> bool {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Indicator> || std::is_same_v<T, Categorical> ||
                      std::is_same_v<T, Gaussian>) {
          return true;
        } else if constexpr (std::is_same_v<T, Embedding>) {
          for (const auto& p : f.im) {
            if (p.get(theta) != 0.0) return false;
          }
          for (const auto& p : f.re) {
            if (p.get(theta) < 0.0) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, ConstantFn>) {
          return f.value.imag() == 0.0 && f.value.real() >= 0.0;
        } else if constexpr (std::is_same_v<T, ExpQuad>) {
          return f.b.imag() == 0.0 && f.c.imag() == 0.0;
        } else if constexpr (std::is_same_v<T, ProductOf>) {
          return f.lhs->is_nonnegative(theta) && f.rhs->is_nonnegative(theta);
        } else {
          return false;  // polynomials may be negative
        }
      },
      fn);
}

LeafClass InputFunction::leaf_class() const {
  return std::visit(
      [&](const auto& f) -> LeafClass {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Indicator> || std::is_same_v<T, Categorical> ||
                      std::is_same_v<T, Embedding>) {
          return LeafClass::FiniteVector;
        } else if constexpr (std::is_same_v<T, Gaussian> || std::is_same_v<T, ExpQuad>) {
          return LeafClass::GaussLike;
        } else if constexpr (std::is_same_v<T, Polynomial>) {
          return LeafClass::Poly;
        } else if constexpr (std::is_same_v<T, ConstantFn>) {
          return LeafClass::Constant;
        } else {  // ProductOf: both sides share a class by construction
          return f.lhs->leaf_class();
        }
      },
      fn);
}

bool InputFunction::has_trainable_params() const {
  return std::visit(
      [&](const auto& f) -> bool {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          for (const auto& p : f.probs) {
            if (p.slot >= 0) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return f.mean.slot >= 0 || f.log_stddev.slot >= 0;
        } else if constexpr (std::is_same_v<T, Embedding>) {
          for (const auto& p : f.re) {
            if (p.slot >= 0) return true;
          }
          for (const auto& p : f.im) {
            if (p.slot >= 0) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<T, ProductOf>) {
          return f.lhs->has_trainable_params() || f.rhs->has_trainable_params();
        } else {
          return false;
        }
      },
      fn);
}

InputFunctionPtr make_leaf_product(const InputFunctionPtr& f, const InputFunctionPtr& g) {
  if (!product_integrable(*f, *g)) {
    throw UnsupportedPairError("no closed-form product for this pair of leaf functions");
  }
  return std::make_shared<InputFunction>(InputFunction(ProductOf{f, g}));
}

bool product_integrable(const InputFunction& f, const InputFunction& g) {
  const LeafClass a = f.leaf_class();
  const LeafClass b = g.leaf_class();
  if (a == LeafClass::Constant || b == LeafClass::Constant) return true;
  return a == b;
}

Cplx product_integral(const InputFunction& f, const InputFunction& g, const Domain& d,
                      const double* theta) {
  auto fp = std::make_shared<InputFunction>(f);
  auto gp = std::make_shared<InputFunction>(g);
  return make_leaf_product(fp, gp)->integrate(d, theta);
}

InputFunction zero_leaf(const Domain& d) {
  if (d.is_finite()) {
    Embedding e;
    e.re.assign(d.cardinality, ParamField::fixed(0.0));
    return InputFunction(e);
  }
  return InputFunction(Polynomial{{0.0}, false, 0.0, 0.0});
}

namespace {
/// Zero function in the same closed-form family as `f`, so that decomposed
/// component circuits remain mutually compatible.
InputFunction zero_like(const InputFunction& f, const Domain& d) {
  switch (f.leaf_class()) {
    case LeafClass::FiniteVector: {
      Embedding e;
      e.re.assign(d.cardinality, ParamField::fixed(0.0));
      return InputFunction(e);
    }
    case LeafClass::GaussLike:
      return InputFunction(ExpQuad{0.0, Cplx(0.0, 0.0), Cplx(kNegInf, 0.0)});
    case LeafClass::Poly: {
      const auto& p = std::get<Polynomial>(f.fn);
      return InputFunction(Polynomial{{0.0}, p.has_interval, p.lo, p.hi});
    }
    case LeafClass::Constant:
      return InputFunction(ConstantFn{Cplx(0.0, 0.0)});
  }
  throw FieldError("unreachable leaf class");
}
}  // namespace

std::pair<InputFunction, InputFunction> split_re_im(const InputFunction& f, const Domain& d) {
  return std::visit(
      [&](const auto& v) -> std::pair<InputFunction, InputFunction> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Embedding>) {
          Embedding re, im;
          const double sign = v.conjugated ? -1.0 : 1.0;
          for (std::size_t i = 0; i < v.re.size(); ++i) {
            re.re.push_back(ParamField::fixed(v.re[i].get(nullptr)));
            im.re.push_back(
                ParamField::fixed(v.im.empty() ? 0.0 : sign * v.im[i].get(nullptr)));
          }
          return {InputFunction(re), InputFunction(im)};
        } else if constexpr (std::is_same_v<T, ConstantFn>) {
          return {InputFunction(ConstantFn{Cplx(v.value.real(), 0.0)}),
                  InputFunction(ConstantFn{Cplx(v.value.imag(), 0.0)})};
        } else if constexpr (std::is_same_v<T, ExpQuad>) {
          if (v.b.imag() != 0.0 || v.c.imag() != 0.0) {
            throw FieldError("complex exponential leaf does not separate into real parts");
          }
          return {InputFunction(v), zero_like(f, d)};
        } else if constexpr (std::is_same_v<T, ProductOf>) {
          throw FieldError("cannot split a composed product leaf");
        } else {
          return {InputFunction(v), zero_like(f, d)};
        }
      },
      f.fn);
}

}  // namespace socs
