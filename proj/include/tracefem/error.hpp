#pragma once

#include <stdexcept>
#include <string>

namespace tracefem {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field was evaluated outside the region where it is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An argument violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The discrete geometry is inconsistent (e.g. the surface leaves the box).
class GeometryError : public Error {
 public:
  using Error::Error;
};

}  // namespace tracefem
