#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace leanreg {

enum class ErrorKind {
  // numerical
  NonFinite,
  SingularMatrix,
  SingularGram,
  SingularCovariance,
  NonPositiveDiagonal,
  NonPSDCorrelation,
  DegenerateVariance,
  DegenerateStudentizer,
  PreconditionViolated,
  Internal,
  // input / usage
  DimensionMismatch,
  InvalidLevel,
  InvalidArgument,
  InvalidSpec,
  EmptyInput,
  FileNotFound,
  ParseError,
  MissingColumn,
  NonNumericCell,
  Usage,
};

std::string_view to_string(ErrorKind kind);

/// True for failures caused by the data or the arithmetic rather than by how
/// the tool was invoked. The CLI maps these to exit code 2.
bool is_numerical(ErrorKind kind);

/// 1-based location inside a text input.
struct CellLocation {
  std::size_t row = 0;
  std::size_t column = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<CellLocation> where = std::nullopt)
      : std::runtime_error(message), kind_(kind), where_(where) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<CellLocation>& location() const noexcept { return where_; }

 private:
  ErrorKind kind_;
  std::optional<CellLocation> where_;
};

}  // namespace leanreg
