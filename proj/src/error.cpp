#include "coxko/error.hpp"

namespace coxko {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidQ: return "InvalidQ";
    case ErrorKind::ConfigParse: return "ConfigParse";
    case ErrorKind::TooFewRows: return "TooFewRows";
    case ErrorKind::ConstantColumn: return "ConstantColumn";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NoEvents: return "NoEvents";
    case ErrorKind::FoldWithoutEvents: return "FoldWithoutEvents";
    case ErrorKind::EmptyTruth: return "EmptyTruth";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::NonNumericCell: return "NonNumericCell";
    case ErrorKind::NonPositiveTime: return "NonPositiveTime";
    case ErrorKind::BadEventValue: return "BadEventValue";
    case ErrorKind::Io: return "Io";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::CalibrationFailed: return "CalibrationFailed";
    case ErrorKind::TooManyFailures: return "TooManyFailures";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidQ:
    case ErrorKind::ConfigParse:
      return ErrorCategory::Config;
    case ErrorKind::NonFinite:
    case ErrorKind::NotPSD:
    case ErrorKind::NotConverged:
    case ErrorKind::CalibrationFailed:
    case ErrorKind::TooManyFailures:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Data;
  }
}

int exit_code_for(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Config: return 2;
    case ErrorCategory::Data: return 3;
    case ErrorCategory::Numerical: return 4;
  }
  return 1;
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace coxko
