#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dla {

enum class ErrorCode {
  ParseError,
  SchemaViolation,
  CycleDetected,
  DanglingReference,
  UnreachableNode,
  DuplicateSubject,
  MissingOriginYear,
  NoDatasetAncestor,
  AmbiguousRange,
  UnknownLicense,
  DuplicateRight,
  MissingRootInterpretation,
  UninterpretedNode,
  RightSpaceMismatch,
  UnknownRight,
  DuplicateScenario,
  StoreCorrupt,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above; the CLI
// maps codes onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the error-code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace dla
