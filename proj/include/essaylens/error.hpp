#pragma once

#include <stdexcept>
#include <string>

namespace essaylens {

/// Base for every error raised by the library. Messages are meant to be
/// shown to a user verbatim, so they name the offending input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data or arguments (missing columns, malformed rows, bad ranges).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: singular system, non-convergence, separation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Remote endpoint failure after retries were exhausted.
class NetworkError : public Error {
 public:
  using Error::Error;
};

}  // namespace essaylens
