#include "eigensal/error.hpp"

namespace eigensal {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptData: return "CorruptData";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::TooFewPixels: return "TooFewPixels";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::TooManyLevels: return "TooManyLevels";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyGroundTruth: return "EmptyGroundTruth";
    case ErrorCode::DegenerateGroundTruth: return "DegenerateGroundTruth";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace eigensal
