#pragma once

#include <stdexcept>
#include <string>

namespace rlie {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range user input (bad parameters, bad files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Vectors, matrices or subspaces with incompatible dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A configured resource budget would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace rlie
