#pragma once

#include <stdexcept>
#include <string>

namespace niph {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition on the input data or parameters does not hold.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The input is valid but carries no spread (zero variance, single atom).
class DegenerateInput : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A configured size budget (points, edges) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace niph
