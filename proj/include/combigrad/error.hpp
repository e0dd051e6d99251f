#pragma once

#include <stdexcept>
#include <string>

namespace combigrad {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Weight/indicator length does not match the instance, or the instance itself
// cannot be solved (e.g. odd grid for perfect matching).
class InstanceError : public Error {
 public:
  using Error::Error;
};

// Values violate a precondition: non-finite, nonpositive where positivity is
// required, mismatched lengths between two caller vectors.
class InputError : public Error {
 public:
  using Error::Error;
};

// The instance exceeds what a solver or enumerator is willing to handle.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Numerically degenerate input (zero-norm rows, rank-deficient alignments).
class NumericError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace combigrad
