#pragma once

#include <stdexcept>
#include <string>

namespace solitonlab {

// Base class for every runtime failure surfaced by the library.
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Jet division with a zero denominator value.
class DivisionByZero : public EvalError {
 public:
  using EvalError::EvalError;
};

// Argument outside the domain of a profile or elementary function.
class DomainError : public EvalError {
 public:
  using EvalError::EvalError;
};

// Conformal factor vanished where the metric g/psi^2 is needed.
class ConformalFactorZero : public EvalError {
 public:
  using EvalError::EvalError;
};

// Evaluation on the singular locus of a closed-form metric family.
class SingularLocus : public EvalError {
 public:
  using EvalError::EvalError;
};

// A closed-form denominator vanished (lambda profile, potential slope).
class SingularDenominator : public EvalError {
 public:
  using EvalError::EvalError;
};

// Metric determinant below the configured floor.
class SingularMetric : public EvalError {
 public:
  using EvalError::EvalError;
};

// A finite-difference stencil left the admissible region.
class StencilOutOfDomain : public EvalError {
 public:
  using EvalError::EvalError;
};

// ODE solution left the representable range (pole crossing).
class BlowUp : public EvalError {
 public:
  using EvalError::EvalError;
};

// Point / signature dimensions disagree.
class DimensionMismatch : public EvalError {
 public:
  using EvalError::EvalError;
};

// Completeness reference that was never registered as known-complete.
class NotKnownComplete : public EvalError {
 public:
  using EvalError::EvalError;
};

// Invalid run configuration (CLI front end).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace solitonlab
