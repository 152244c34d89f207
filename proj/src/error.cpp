#include "rwc/error.hpp"

namespace rwc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::UnparseableRow: return "UnparseableRow";
    case ErrorCode::DuplicateDate: return "DuplicateDate";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::EmptySegment: return "EmptySegment";
    case ErrorCode::DateMismatch: return "DateMismatch";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::IndexMismatch: return "IndexMismatch";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::InsufficientLength: return "InsufficientLength";
    case ErrorCode::DegenerateFeature: return "DegenerateFeature";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyBuffer: return "EmptyBuffer";
    case ErrorCode::InvalidCount: return "InvalidCount";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
  }
  return "Unknown";
}

ErrorClass classify(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::NoCandidates:
      return ErrorClass::Config;
    case ErrorCode::MissingColumn:
    case ErrorCode::UnparseableRow:
    case ErrorCode::DuplicateDate:
    case ErrorCode::EmptyFile:
    case ErrorCode::EmptySegment:
    case ErrorCode::DateMismatch:
    case ErrorCode::LabelMismatch:
    case ErrorCode::IndexMismatch:
    case ErrorCode::FileNotFound:
      return ErrorClass::Data;
    default:
      return ErrorClass::Numeric;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace rwc
