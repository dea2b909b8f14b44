#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vsrsynth {

enum class Errc {
  kInvalidArgument,
  kDimensionMismatch,
  kOutOfRange,
  kFileNotFound,
  kUnsupportedFormat,
  kIoError,
  kInsufficientFrames,
  kInvalidConfig,
  kValidationFailed,
};

/// Stable snake_case name used in structured error output.
std::string_view errc_name(Errc code) noexcept;

/// Single exception type for the library; `code()` distinguishes the variants.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

}  // namespace vsrsynth
