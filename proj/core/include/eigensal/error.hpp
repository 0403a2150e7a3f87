#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eigensal {

enum class ErrorCode {
  MissingFile,
  UnsupportedFormat,
  CorruptData,
  IoFailure,
  NonPositiveSigma,
  TooFewPixels,
  IndexOutOfRange,
  ImageTooSmall,
  TooManyLevels,
  LevelOutOfRange,
  ShapeMismatch,
  NonPositiveRadius,
  EmptyInput,
  EmptyGroundTruth,
  DegenerateGroundTruth,
  DimensionMismatch,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (the CLI, the batch evaluator) can branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace eigensal
