#pragma once

#include <stdexcept>
#include <string>

namespace xslab {

/// Raised when input data violates a schema or invariant (exit code 3 at the CLI).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for bad command-line usage such as an unknown signal name (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xslab
