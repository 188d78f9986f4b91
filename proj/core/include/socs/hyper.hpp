#pragma once

#include <vector>

#include "socs/field.hpp"

namespace socs {

/// Element of the Cayley-Dickson algebra of dimension 2^order
/// (order 0: reals, 1: complex, 2: quaternions, ...). Coefficients are stored
/// over the recursive basis: an element x of order w is the pair (x1, x2) of
/// order w-1 elements with x = x1 + x2 * i_w, laid out as [x1-coeffs, x2-coeffs].
class Hyper {
public:
  Hyper() : coeffs_(1, 0.0) {}
  explicit Hyper(int order) : coeffs_(std::size_t(1) << order, 0.0), order_(order) {}
  explicit Hyper(std::vector<double> coeffs);

  static Hyper real(double x, int order = 0);
  static Hyper from_complex(Cplx z, int order = 1);

  int order() const { return order_; }
  std::size_t dim() const { return coeffs_.size(); }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  /// Promotes to a larger algebra by zero-padding the new components.
  Hyper promoted(int order) const;

  Hyper conj() const;
  Hyper operator-() const;
  Hyper operator+(const Hyper& o) const;
  Hyper operator-(const Hyper& o) const;
  /// Cayley-Dickson product; not commutative for order >= 2.
  Hyper operator*(const Hyper& o) const;

  /// First and second half as order-1 elements.
  Hyper first_half() const;
  Hyper second_half() const;

  bool is_zero(double tol = 0.0) const;
  Cplx to_complex() const;  // valid for order <= 1

private:
  std::vector<double> coeffs_;
  int order_ = 0;
};

}  // namespace socs
