#pragma once

#include <stdexcept>
#include <string>

namespace semitoric {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A phase point violates a manifold constraint, or lives on the wrong manifold.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Adaptive integration failed (step underflow, step cap, missed return).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Small divisor or collapsed spectrum in a normal-form computation.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// The spectrum at a rank-0 point has the wrong type for the requested operation.
class TypeError : public Error {
 public:
  using Error::Error;
};

/// A requested regular value lies outside the momentum image.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A fit or a quadrature missed its accuracy target.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Parameters sit within the refusal window around a transition value.
class NearDegenerateError : public Error {
 public:
  using Error::Error;
};

/// Malformed user configuration (unknown key, bad value).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace semitoric
