#pragma once

#include <stdexcept>
#include <string>

namespace gplda {

enum class ErrorCode {
  InvalidDimension,
  InvalidInput,
  Validation,
  Parse,
  DimensionMismatch,
  SingularMatrix,
  DegenerateBetween,
  InvalidHyperparameter,
  NumericFailure,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The code decides the C API status
/// and the CLI exit status; the message is meant for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the backfitting loop when the state stops being finite.
class NumericFailure : public Error {
 public:
  NumericFailure(int sweep, const std::string& what)
      : Error(ErrorCode::NumericFailure, what), sweep_(sweep) {}

  int sweep() const noexcept { return sweep_; }

 private:
  int sweep_;
};

}  // namespace gplda
