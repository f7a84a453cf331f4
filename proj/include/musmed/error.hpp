#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace musmed {

enum class ErrorCode {
  kInvalidArgument,
  kUnknownEmotion,
  kUnmappedTag,
  kMappingParse,
  kMalformedLine,
  kStatsFormat,
  kNoMoodForEmotion,
  kEmptyDistribution,
  kBackendUnavailable,
  kBackendRejected,
  kBadAudio,
  kAllSilent,
  kSilentClip,
  kRateMismatch,
  kOverlapTooLong,
  kTooShort,
  kBadHeader,
  kUnsupportedFormat,
  kLengthMismatch,
  kNoPositives,
  kZeroVector,
  kDimMismatch,
  kNoMappableTags,
  kGenerationFailed,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace musmed
