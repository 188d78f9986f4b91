#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "socs/field.hpp"
#include "socs/variables.hpp"

namespace socs {

/// A scalar leaf parameter: either a fixed value or a reference into the
/// model's parameter vector, optionally through an exp reparameterization
/// (used for nonnegative quantities trained unconstrained). `value` always
/// holds the current/initial post-transform value so evaluation without a
/// parameter vector stays valid.
struct ParamField {
  double value = 0.0;
  int slot = -1;
  bool exp_transform = false;

  static ParamField fixed(double v) { return {v, -1, false}; }

  double get(const double* theta) const {
    if (slot < 0 || theta == nullptr) return value;
    const double raw = theta[slot];
    return exp_transform ? std::exp(raw) : raw;
  }
};

struct Indicator {
  int value = 0;
};

/// Unnormalized nonnegative weights over a finite domain.
struct Categorical {
  std::vector<ParamField> probs;
};

struct Gaussian {
  ParamField mean;
  ParamField log_stddev;
};

/// Field-valued vector over a finite domain; `im` empty means real-valued.
struct Embedding {
  std::vector<ParamField> re;
  std::vector<ParamField> im;
  bool conjugated = false;
};

/// Univariate polynomial; integrable only over a bounded interval.
struct Polynomial {
  std::vector<double> coeffs;  // coeffs[k] * x^k
  bool has_interval = false;
  double lo = 0.0, hi = 0.0;
};

/// A constant leaf with empty scope; produced by evidence conditioning.
struct ConstantFn {
  Cplx value{0.0, 0.0};
};

/// exp(-a x^2 + b x + c); the closed-form product family of Gaussian-type
/// leaves with exponential tilts (b, c may be complex).
struct ExpQuad {
  double a = 0.0;
  Cplx b{0.0, 0.0};
  Cplx c{0.0, 0.0};
};

struct InputFunction;
using InputFunctionPtr = std::shared_ptr<const InputFunction>;

/// Deferred product of two leaf functions over the same variable. Keeps the
/// factors intact so gradients reach the original parameters of composed
/// circuits.
struct ProductOf {
  InputFunctionPtr lhs;
  InputFunctionPtr rhs;
};

using FnVariant =
    std::variant<Indicator, Categorical, Gaussian, Embedding, Polynomial, ConstantFn, ExpQuad, ProductOf>;

/// Structural family a leaf belongs to, used by the closed-form product table.
enum class LeafClass { FiniteVector, GaussLike, Poly, Constant };

struct InputFunction {
  FnVariant fn;

  explicit InputFunction(FnVariant f) : fn(std::move(f)) {}

  /// Point evaluation. For finite domains `x` is the category code.
  Cplx eval(const Domain& d, double x, const double* theta) const;

  /// Log-space point evaluation (exact for Gaussian tails).
  LogComplex eval_log(const Domain& d, double x, const double* theta) const;

  /// Closed-form integral over the variable's domain (sum for finite domains).
  /// Throws UnsupportedPairError when no closed form exists.
  Cplx integrate(const Domain& d, const double* theta) const;

  /// Complex conjugate of the function.
  InputFunction conjugate() const;

  /// True if the function is one of the nonnegative families at the current
  /// parameter values.
  bool is_nonnegative(const double* theta) const;

  LeafClass leaf_class() const;

  bool has_trainable_params() const;
};

/// Closed-form product of two leaves over the same variable.
InputFunctionPtr make_leaf_product(const InputFunctionPtr& f, const InputFunctionPtr& g);

/// True if the product f*g admits a closed-form integral (the compatibility
/// condition on leaf pairs). Polynomial pairs are accepted; integrating them
/// still requires a bounded interval.
bool product_integrable(const InputFunction& f, const InputFunction& g);

/// Value of the integral of f*g over the shared variable's domain.
Cplx product_integral(const InputFunction& f, const InputFunction& g, const Domain& d,
                      const double* theta = nullptr);

/// All-zeros leaf over a variable of the given domain.
InputFunction zero_leaf(const Domain& d);

/// Splits a (possibly complex-valued) leaf into real and imaginary parts at
/// the current parameter values. Throws FieldError if the function does not
/// separate (e.g. a complex exponential tilt).
std::pair<InputFunction, InputFunction> split_re_im(const InputFunction& f, const Domain& d);

}  // namespace socs
