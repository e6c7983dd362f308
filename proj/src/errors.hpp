#pragma once

#include <stdexcept>
#include <string>

namespace mmes {

// Thrown when an operation receives objects of incompatible sizes
// (state vs bipartition, coupling matrix vs spin vector, ...).
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a state vector is too far from unit norm to be accepted.
struct NormalizationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a covariance matrix fails symmetry, positivity or the
// uncertainty relation.
struct CovarianceError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite objective or failed matrix function: signals a kernel bug or
// pathological parameters rather than bad user input.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mmes
