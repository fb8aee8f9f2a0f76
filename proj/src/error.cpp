#include "leanreg/error.hpp"

namespace leanreg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::SingularCovariance: return "SingularCovariance";
    case ErrorKind::NonPositiveDiagonal: return "NonPositiveDiagonal";
    case ErrorKind::NonPSDCorrelation: return "NonPSDCorrelation";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::DegenerateStudentizer: return "DegenerateStudentizer";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::Internal: return "Internal";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidLevel: return "InvalidLevel";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::NonNumericCell: return "NonNumericCell";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFinite:
    case ErrorKind::SingularMatrix:
    case ErrorKind::SingularGram:
    case ErrorKind::SingularCovariance:
    case ErrorKind::NonPositiveDiagonal:
    case ErrorKind::NonPSDCorrelation:
    case ErrorKind::DegenerateVariance:
    case ErrorKind::DegenerateStudentizer:
    case ErrorKind::PreconditionViolated:
    case ErrorKind::Internal:
      return true;
    default:
      return false;
  }
}

}  // namespace leanreg
