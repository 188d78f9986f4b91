#include "socs/hyper.hpp"

#include <cmath>
#include <stdexcept>

namespace socs {

namespace {
int order_of(std::size_t n) {
  int w = 0;
  while ((std::size_t(1) << w) < n) ++w;
  if ((std::size_t(1) << w) != n) {
    throw std::invalid_argument("hypercomplex coefficient count must be a power of two");
  }
  return w;
}
}  // namespace

Hyper::Hyper(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  order_ = order_of(coeffs_.size());
}

Hyper Hyper::real(double x, int order) {
  Hyper h(order);
  h.coeffs_[0] = x;
  return h;
}

Hyper Hyper::from_complex(Cplx z, int order) {
  Hyper h(order);
  h.coeffs_[0] = z.real();
  if (order >= 1) h.coeffs_[1] = z.imag();
  return h;
}

Hyper Hyper::promoted(int order) const {
  Hyper h(order);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) h.coeffs_[i] = coeffs_[i];
  return h;
}

Hyper Hyper::conj() const {
  if (order_ == 0) return *this;
  Hyper h = *this;
  // (x1, x2)^dagger = (x1^dagger, -x2), applied recursively: every coefficient
  // except the leading real one flips sign.
  for (std::size_t i = 1; i < h.coeffs_.size(); ++i) h.coeffs_[i] = -h.coeffs_[i];
  return h;
}

Hyper Hyper::operator-() const {
  Hyper h = *this;
  for (auto& c : h.coeffs_) c = -c;
  return h;
}

Hyper Hyper::operator+(const Hyper& o) const {
  Hyper h = *this;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) h.coeffs_[i] += o.coeffs_[i];
  return h;
}

Hyper Hyper::operator-(const Hyper& o) const {
  Hyper h = *this;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) h.coeffs_[i] -= o.coeffs_[i];
  return h;
}

Hyper Hyper::first_half() const {
  std::vector<double> c(coeffs_.begin(), coeffs_.begin() + coeffs_.size() / 2);
  return Hyper(std::move(c));
}

Hyper Hyper::second_half() const {
  std::vector<double> c(coeffs_.begin() + coeffs_.size() / 2, coeffs_.end());
  return Hyper(std::move(c));
}

Hyper Hyper::operator*(const Hyper& o) const {
  if (order_ != o.order_) throw std::invalid_argument("hypercomplex order mismatch");
  if (order_ == 0) return real(coeffs_[0] * o.coeffs_[0]);
  // (x1, x2)(y1, y2) = (x1 y1 - y2^dagger x2, y2 x1 + x2 y1^dagger)
  const Hyper x1 = first_half(), x2 = second_half();
  const Hyper y1 = o.first_half(), y2 = o.second_half();
  const Hyper a = x1 * y1 - y2.conj() * x2;
  const Hyper b = y2 * x1 + x2 * y1.conj();
  std::vector<double> c;
  c.reserve(coeffs_.size());
  c.insert(c.end(), a.coeffs_.begin(), a.coeffs_.end());
  c.insert(c.end(), b.coeffs_.begin(), b.coeffs_.end());
  return Hyper(std::move(c));
}

bool Hyper::is_zero(double tol) const {
  for (double c : coeffs_) {
    if (std::abs(c) > tol) return false;
  }
  return true;
}

Cplx Hyper::to_complex() const {
  if (order_ > 1) throw std::invalid_argument("not a complex-representable element");
  return Cplx(coeffs_[0], order_ >= 1 ? coeffs_[1] : 0.0);
}

}  // namespace socs
