#pragma once

#include <stdexcept>
#include <string>

namespace wlpp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A distribution or model parameter lies outside its domain (rate <= 0, p outside (0,1), ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural invariant (non-Hermitian, unsorted spectrum, broken interlacing).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Index or argument outside the set on which an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration is inconsistent (horizon longer than the pihat sequence, bad grid).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would be too large to run.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// State where a kernel denominator vanishes.
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

/// Numerical procedure failed to reach its tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace wlpp
