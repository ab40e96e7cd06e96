#pragma once

#include <stdexcept>
#include <string>

namespace ptcfem {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linear algebra failures. SolverFailure is the family root so callers can
// catch "the solve went wrong" without caring how.
class SolverFailure : public Error {
 public:
  using Error::Error;
};
class SingularFactorization : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};
class IndefiniteMatrix : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};
class MaxIterationsExceeded : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};

/// Zero increment in step-size control: the iteration is exactly stationary.
class DegenerateIncrement : public Error {
 public:
  using Error::Error;
};

/// f or f' returned NaN/Inf at a quadrature point (iterate blow-up).
class NonFiniteCoefficient : public Error {
 public:
  using Error::Error;
};

class MeshMismatch : public Error {
 public:
  using Error::Error;
};
class AncestryMismatch : public Error {
 public:
  using Error::Error;
};
class BoundaryFacet : public Error {
 public:
  using Error::Error;
};
class UnsupportedDomain : public Error {
 public:
  using Error::Error;
};

class UnknownProblem : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};
class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace ptcfem
