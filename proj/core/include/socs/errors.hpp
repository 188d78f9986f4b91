#pragma once

#include <stdexcept>
#include <string>

namespace socs {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A circuit violates a required structural property (smoothness, decomposability).
class StructureError : public Error {
public:
  using Error::Error;
};

/// Two circuits cannot be multiplied: their scope decompositions disagree
/// or a pair of leaf functions has no closed-form product.
class IncompatibleError : public Error {
public:
  using Error::Error;
};

/// An operation was requested on a circuit over the wrong number field.
class FieldError : public Error {
public:
  using Error::Error;
};

/// An assignment value lies outside a variable's domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// No closed form exists for a product or integral of leaf functions.
class UnsupportedPairError : public Error {
public:
  using Error::Error;
};

/// A circuit required to be monotone is not.
class MonotonicityError : public Error {
public:
  using Error::Error;
};

/// Tensor shapes do not match their declared dimensions.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A matrix required to be positive semi-definite has a negative eigenvalue.
class NotPsdError : public Error {
public:
  using Error::Error;
};

/// An enumeration exceeded its configured budget.
class BudgetExceededError : public Error {
public:
  using Error::Error;
};

/// A numerical failure: log of zero, non-finite partition function, and similar.
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace socs
