#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rwc {

enum class ErrorCode {
  // configuration
  InvalidConfig,
  NoCandidates,
  // data
  MissingColumn,
  UnparseableRow,
  DuplicateDate,
  EmptyFile,
  EmptySegment,
  DateMismatch,
  LabelMismatch,
  IndexMismatch,
  FileNotFound,
  // numeric
  InsufficientHistory,
  InsufficientLength,
  DegenerateFeature,
  EmptyInput,
  EmptyBuffer,
  InvalidCount,
  NonFiniteValue,
};

enum class ErrorClass { Config, Data, Numeric };

std::string_view to_string(ErrorCode code);
ErrorClass classify(ErrorCode code);

/// Exception carrying a machine-readable code. The CLI maps the code's class
/// onto its exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rwc
