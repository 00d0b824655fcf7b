#pragma once

#include <stdexcept>
#include <string>

namespace ir2 {

/// Malformed or out-of-contract input (non-finite values, bad indices, length mismatch).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Too few observations for the requested estimator.
class InsufficientSampleError : public InputError {
 public:
  using InputError::InputError;
};

/// The response has n0 = n (e.g. all values equal); no estimator is defined.
class DegenerateResponseError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine failed to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ir2
