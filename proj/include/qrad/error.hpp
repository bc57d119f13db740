#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrad {

enum class ErrorCode {
  NotHermitian,
  NoConvergence,
  DimensionMismatch,
  EmptyInput,
  BadDimension,
  SpectrumOutOfRange,
  NotTwoByTwo,
  DimensionTooSmall,
  ParamOutOfRange,
  NotNilpotent,
  NotPositive,
  NotUnitary,
  NotProjection,
  NonFinite,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qrad
