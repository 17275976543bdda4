#include "gplda/error.hpp"

namespace gplda {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid dimension";
    case ErrorCode::InvalidInput: return "invalid input";
    case ErrorCode::Validation: return "validation error";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::SingularMatrix: return "singular matrix";
    case ErrorCode::DegenerateBetween: return "degenerate between-class covariance";
    case ErrorCode::InvalidHyperparameter: return "invalid hyperparameter";
    case ErrorCode::NumericFailure: return "numeric failure";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace gplda
