#pragma once

#include <stdexcept>
#include <string>

namespace dereverb {

// Process exit codes used by the command-line front end.
enum class ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kIoError = 2,
  kValidationError = 3,
  kNumericalFailure = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::kFailure; }
};

// Bad arguments or unusable input data (mismatched rates, silent input, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override {
    return ExitCode::kValidationError;
  }
};

// Unreadable/unwritable files, malformed WAV/CSV/JSON.
class IoError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kIoError; }
};

// Division by zero, NaN/Inf in a result.
class NumericalError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override {
    return ExitCode::kNumericalFailure;
  }
};

}  // namespace dereverb
