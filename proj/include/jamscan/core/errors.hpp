#pragma once

#include <stdexcept>
#include <string>

namespace jamscan {

// Base of every error raised by the library. The CLI maps the two families
// below onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or missing input data (exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

// Invalid parameters or configuration (exit code 3).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public InputError {
 public:
  using InputError::InputError;
};

class FormatError : public InputError {
 public:
  using InputError::InputError;
};

class CorruptionError : public InputError {
 public:
  using InputError::InputError;
};

class SequencingError : public InputError {
 public:
  using InputError::InputError;
};

class DegenerateGeometryError : public InputError {
 public:
  using InputError::InputError;
};

class SpecificationError : public ConfigurationError {
 public:
  using ConfigurationError::ConfigurationError;
};

class DomainError : public ConfigurationError {
 public:
  using ConfigurationError::ConfigurationError;
};

class CalibrationError : public ConfigurationError {
 public:
  using ConfigurationError::ConfigurationError;
};

// Raised by the pipeline when neither thresholds nor a benign segment exist.
class CalibrationRequiredError : public CalibrationError {
 public:
  using CalibrationError::CalibrationError;
};

}  // namespace jamscan
