#pragma once

#include <stdexcept>
#include <string>

namespace phasebound {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix sizes that do not fit together, or a cutoff that is too small.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An argument outside its mathematical domain (negative weight, beta <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The Fock cutoff is too small for the requested quantity.
class TruncationError : public Error {
 public:
  using Error::Error;
};

// An iterative or quadrature procedure failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A computed lower bound exceeded the exact value or the upper bound.
class SandwichViolation : public Error {
 public:
  using Error::Error;
};

// The requested Hamiltonian / sigma combination has no implementation.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace phasebound
