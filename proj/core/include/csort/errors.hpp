#pragma once

#include <stdexcept>
#include <string>

namespace csort {

// Root of all library errors. Validation errors (bad input, violated
// preconditions) derive from Error directly; InternalInvariantViolation marks
// a bug or an upstream non-optimal assignment.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MassMismatch : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ParamError : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class InvestmentUndefined : public Error {
 public:
  using Error::Error;
};

class InvalidCost : public Error {
 public:
  using Error::Error;
};

class InvalidAssignment : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class InternalInvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace csort
