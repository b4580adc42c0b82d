#pragma once

#include <stdexcept>
#include <string>

namespace kleinzone {

/// Base class of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the domain of an operation (e.g. evanescent states).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Energy exactly on a Klein-zone boundary where p or q vanishes.
class BoundaryError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Zero denominators: singular spinor, vanishing step determinant, pole of Phi.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// The requested accuracy cannot be reached on the precision ladder.
class PrecisionError : public Error {
 public:
  PrecisionError(const std::string& what, int bits, double estimate)
      : Error(what), bits_(bits), estimate_(estimate) {}
  int bits() const { return bits_; }
  double estimate() const { return estimate_; }

 private:
  int bits_;
  double estimate_;
};

/// Magnitudes beyond the double exponent range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// ODE integration failure (step size collapsed).
class StiffnessError : public Error {
 public:
  StiffnessError(const std::string& what, double x) : Error(what), x_(x) {}
  double x() const { return x_; }

 private:
  double x_;
};

}  // namespace kleinzone
