#pragma once

#include <stdexcept>
#include <string>

namespace qcentral {

// Every failure the library reports derives from Error so that the CLI can
// map it to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration or parameter combination (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Argument beyond the range covered by a precomputed table.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or series failed its own convergence check.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Memory budget, term cap or I/O failure (exit code 3).
class ResourceError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcentral
