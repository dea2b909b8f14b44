#include "vsrsynth/error.hpp"

namespace vsrsynth {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidArgument: return "invalid_argument";
    case Errc::kDimensionMismatch: return "dimension_mismatch";
    case Errc::kOutOfRange: return "out_of_range";
    case Errc::kFileNotFound: return "file_not_found";
    case Errc::kUnsupportedFormat: return "unsupported_format";
    case Errc::kIoError: return "io_error";
    case Errc::kInsufficientFrames: return "insufficient_frames";
    case Errc::kInvalidConfig: return "invalid_config";
    case Errc::kValidationFailed: return "validation_failed";
  }
  return "unknown";
}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace vsrsynth
