#pragma once

#include <stdexcept>
#include <string>

namespace pa {

// Input violates a documented invariant (negative mass, bad spec, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two objects that must share an index structure do not.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of an operation (time outside (0,1], n < 2, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Conditional requested on a zero-mass color pair.
class UndefinedConditional : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An EventLog failed replay validation.
class CorruptedLog : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Constraint set admits no point of the truncated simplex.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too many replicas produced non-finite importance weights.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pa
