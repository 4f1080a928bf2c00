#pragma once

#include <stdexcept>
#include <string>

namespace maxpsh {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or point dimensions do not match the body or model.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the set an operation is defined on
/// (body, tube, center, unit disc, strip).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative evaluation exceeded its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The operation is not defined for this body or model variant
/// (e.g. a C2 check on a polytope).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A body or model specification is malformed or violates an invariant.
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace maxpsh
