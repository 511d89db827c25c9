#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace carve {

enum class ErrorCode {
  BadMagic,
  UnsupportedField,
  TruncatedData,
  ParseError,
  DuplicateLabel,
  SchemaError,
  ValueError,
  IoError,
  DimsMismatch,
  LabelOutOfRange,
  NothingToRemove,
  EmptyData,
  ItemNeverRanked,
  LengthMismatch,
  TooFewPoints,
  BadSpec,
  NotFound,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library is reported as a carve::Error
// carrying one of the codes above; callers switch on code() rather than type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace carve
