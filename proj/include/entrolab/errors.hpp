#pragma once

#include <stdexcept>
#include <string>

namespace entrolab {

// Malformed arguments: bad dimensions, non-Hermitian input, trace out of range.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

// Raised when a state of zero trace would have to be normalized.
class ZeroTraceError : public InputError {
 public:
  using InputError::InputError;
};

// Numerical failure: SDP not solved to tolerance, eigen iteration diverged.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace entrolab
