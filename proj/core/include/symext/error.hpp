#pragma once

#include <stdexcept>
#include <string>

namespace symext {

/// Bad input: malformed partition, out-of-range parameter, shape mismatch.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured resource cap would be exceeded.
class TooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Numerical breakdown that indicates a bug rather than bad input.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace symext
