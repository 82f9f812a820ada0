#pragma once

#include <stdexcept>
#include <string>

namespace lpmono {

// Process exit codes shared by the CLI and the command layer.
enum class ExitCode : int {
  ok = 0,
  validation = 2,
  divergence = 3,
  inner_solver = 4,
  io = 5,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed values: non-finite input, bad exponents, bad config fields.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Mismatched dimensions or sequence lengths.
class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Argument outside a function's mathematical domain.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Indexing past the end of a finite explicit schedule.
class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Filesystem failures while reading configs or writing outputs.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lpmono
