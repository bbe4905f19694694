#pragma once

#include <stdexcept>
#include <string>

namespace commlab {

// Precondition or guard violation on caller-supplied data.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed to produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace commlab
