#pragma once

#include <stdexcept>
#include <string>

namespace margin_guard {

// Malformed input or a violated precondition on caller-supplied data.
// The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An internal consistency check failed. The CLI maps this to exit code 3.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace margin_guard
