#pragma once

#include <stdexcept>

namespace spindir {

// POVM closure violated: outcome probabilities do not resolve unity.
struct ClosureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative scheme failed to reach its stated tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Direction-set construction failed (singular system or nonpositive weight).
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spindir
