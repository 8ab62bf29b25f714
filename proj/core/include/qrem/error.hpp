#pragma once

#include <stdexcept>
#include <string>

namespace qrem {

// Invalid input: bad ranges, mismatched sizes, inadmissible parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two objects over different spin counts were combined.
class DimensionError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A numerical engine failed (non-convergence, all probes lost, I/O).
class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public EngineError {
 public:
  using EngineError::EngineError;
};

}  // namespace qrem
