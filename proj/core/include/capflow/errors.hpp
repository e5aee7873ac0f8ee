#pragma once

#include <stdexcept>
#include <string>

namespace capflow {

/// Base class for all capflow errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The diffusivity tail decays too slowly: the antiderivative machinery
/// (G, its inverse, the wave profile) is only defined for tail exponents > 2.
class NonIntegrableTail : public Error {
 public:
  using Error::Error;
};

/// The diffusivity tail decays too fast for the boundary blow-up
/// construction, which requires a tail exponent <= 2.
class IntegrableTail : public Error {
 public:
  using Error::Error;
};

/// Argument outside the valid domain of an inverse map.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// An expanding search found no sign change; the map is not surjective.
class BracketFailure : public Error {
 public:
  using Error::Error;
};

/// No root exists inside the required interval.
class RootNotBracketed : public Error {
 public:
  using Error::Error;
};

/// Grid construction parameters are invalid.
class BadDimension : public Error {
 public:
  using Error::Error;
};

/// The requested time step exceeds the stability bound.
class CflViolation : public Error {
 public:
  using Error::Error;
};

/// No finite slopes/curvatures available to bound the time step.
class DegenerateState : public Error {
 public:
  using Error::Error;
};

/// Two series/fields that must share a grid do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A limit estimate was requested before the run converged.
class NotConverged : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace capflow
