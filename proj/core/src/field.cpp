#include "socs/field.hpp"

#include <algorithm>
#include <cmath>

namespace socs {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

/// Unit phase cis(arg), with args of exactly 0 or pi mapped to +-1 so that
/// real values represented in log-complex form stay exactly real (the
/// argument then acts as the sign bit of a log-sign representation).
Cplx unit_phase(double arg) {
  if (arg == 0.0) return Cplx(1.0, 0.0);
  if (arg == kPi) return Cplx(-1.0, 0.0);
  return Cplx(std::cos(arg), std::sin(arg));
}
}  // namespace

double normalize_arg(double a) {
  if (a > -kPi && a <= kPi) return a;
  a = std::remainder(a, 2.0 * kPi);  // lands in [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

LogComplex log_complex(Cplx z) {
  const double m = std::abs(z);
  if (m == 0.0) return LogComplex::zero();
  double a = std::atan2(z.imag(), z.real());
  if (a <= -kPi) a = kPi;  // atan2(-0.0, x<0) yields -pi
  return {std::log(m), a};
}

Cplx exp_complex(const LogComplex& l) {
  if (l.is_zero()) return Cplx(0.0, 0.0);
  return std::exp(l.log_mag) * unit_phase(l.arg);
}

LogComplex log_mul(const LogComplex& a, const LogComplex& b) {
  if (a.is_zero() || b.is_zero()) return LogComplex::zero();
  return {a.log_mag + b.log_mag, normalize_arg(a.arg + b.arg)};
}

LogComplex log_real(double x) {
  if (x == 0.0) return LogComplex::zero();
  return {std::log(std::abs(x)), x > 0.0 ? 0.0 : kPi};
}

LogComplex logsumexp_complex(const std::vector<std::pair<Cplx, LogComplex>>& terms) {
  double shift = kNegInf;
  for (const auto& [w, v] : terms) {
    if (v.is_zero() || (w.real() == 0.0 && w.imag() == 0.0)) continue;
    shift = std::max(shift, v.log_mag);
  }
  if (shift == kNegInf) return LogComplex::zero();

  Cplx acc(0.0, 0.0);
  for (const auto& [w, v] : terms) {
    if (v.is_zero() || (w.real() == 0.0 && w.imag() == 0.0)) continue;
    acc += w * (std::exp(v.log_mag - shift) * unit_phase(v.arg));
  }
  const double mag = std::abs(acc);
  if (mag == 0.0) return LogComplex::zero();
  double a = std::atan2(acc.imag(), acc.real());
  if (a <= -kPi) a = kPi;
  return {shift + std::log(mag), a};
}

LogComplex log_add(const LogComplex& a, const LogComplex& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const double shift = std::max(a.log_mag, b.log_mag);
  const Cplx acc = std::exp(a.log_mag - shift) * unit_phase(a.arg) +
                   std::exp(b.log_mag - shift) * unit_phase(b.arg);
  const double mag = std::abs(acc);
  if (mag == 0.0) return LogComplex::zero();
  double ang = std::atan2(acc.imag(), acc.real());
  if (ang <= -kPi) ang = kPi;
  return {shift + std::log(mag), ang};
}

LogSign LogSign::from(double x) {
  if (x == 0.0) return zero();
  return {std::log(std::abs(x)), x > 0.0 ? 1 : -1};
}

double LogSign::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

LogSign logsumexp_sign(const std::vector<std::pair<double, LogSign>>& terms) {
  double shift = kNegInf;
  for (const auto& [w, v] : terms) {
    if (v.sign == 0 || w == 0.0) continue;
    shift = std::max(shift, v.log_abs);
  }
  if (shift == kNegInf) return LogSign::zero();
  double acc = 0.0;
  for (const auto& [w, v] : terms) {
    if (v.sign == 0 || w == 0.0) continue;
    acc += w * v.sign * std::exp(v.log_abs - shift);
  }
  if (acc == 0.0) return LogSign::zero();
  return {shift + std::log(std::abs(acc)), acc > 0.0 ? 1 : -1};
}

LogSign logsign_mul(const LogSign& a, const LogSign& b) {
  if (a.sign == 0 || b.sign == 0) return LogSign::zero();
  return {a.log_abs + b.log_abs, a.sign * b.sign};
}

}  // namespace socs
