#pragma once

#include <stdexcept>
#include <string>

namespace coxko {

enum class ErrorKind {
  // configuration
  InvalidArgument,
  InvalidQ,
  ConfigParse,
  // data
  TooFewRows,
  ConstantColumn,
  DimensionMismatch,
  NoEvents,
  FoldWithoutEvents,
  EmptyTruth,
  MissingColumn,
  NonNumericCell,
  NonPositiveTime,
  BadEventValue,
  Io,
  // numerical
  NonFinite,
  NotPSD,
  NotConverged,
  CalibrationFailed,
  TooManyFailures,
};

enum class ErrorCategory { Config, Data, Numerical };

const char* to_string(ErrorKind kind);
ErrorCategory category_of(ErrorKind kind);

/// Process exit code for an error category: 2 config, 3 data, 4 numerical.
int exit_code_for(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace coxko
