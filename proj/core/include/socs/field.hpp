#pragma once

#include <complex>
#include <limits>
#include <vector>

namespace socs {

using Cplx = std::complex<double>;

/// Number field a circuit's weights and leaf functions live in.
enum class Field { Real, Complex, Hypercomplex };

/// Semiring used by the forward pass.
enum class EvalMode { Linear, LogSign, LogComplex };

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// A nonzero complex value z stored as its complex logarithm:
/// log_mag = log|z| and arg = arg(z) in (-pi, pi]. Zero is represented
/// exactly by the sentinel {log_mag: -inf, arg: 0}.
struct LogComplex {
  double log_mag = kNegInf;
  double arg = 0.0;

  bool is_zero() const { return log_mag == kNegInf; }

  static LogComplex zero() { return {kNegInf, 0.0}; }
  static LogComplex one() { return {0.0, 0.0}; }
};

/// Normalizes an angle to (-pi, pi].
double normalize_arg(double a);

/// Complex logarithm; maps 0 to the zero sentinel.
LogComplex log_complex(Cplx z);

/// Complex exponential of a LogComplex value (the stored value itself).
Cplx exp_complex(const LogComplex& l);

/// Product in log space.
LogComplex log_mul(const LogComplex& a, const LogComplex& b);

/// Real scalar log value.
LogComplex log_real(double x);

/// log(sum_k w_k * exp(v_k)) with the max-real-part shift applied before
/// exponentiation. Zero-sentinel terms are skipped; an all-zero input (or an
/// exactly cancelling sum) returns the zero sentinel.
LogComplex logsumexp_complex(const std::vector<std::pair<Cplx, LogComplex>>& terms);

/// Two-term log-sum-exp with unit weights; used for adjoint accumulation.
LogComplex log_add(const LogComplex& a, const LogComplex& b);

/// Real value in log-sign form: x = sign * exp(log_abs). sign in {-1, 0, +1},
/// with sign 0 iff log_abs is the -inf sentinel.
struct LogSign {
  double log_abs = kNegInf;
  int sign = 0;

  static LogSign zero() { return {kNegInf, 0}; }
  static LogSign from(double x);
  double value() const;
};

LogSign logsumexp_sign(const std::vector<std::pair<double, LogSign>>& terms);
LogSign logsign_mul(const LogSign& a, const LogSign& b);

}  // namespace socs
