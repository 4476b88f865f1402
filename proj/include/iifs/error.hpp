#pragma once

#include <stdexcept>

namespace iifs {

// Bad user input: unreadable files, malformed values, contract violations
// at the tool boundary. The CLI maps this to exit code 2.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The request is well-formed but the support/stratification constraints
// leave nothing to work with. The CLI maps this to exit code 3.
struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace iifs
