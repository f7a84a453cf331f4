#include "musmed/error.hpp"

namespace musmed {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnknownEmotion: return "UnknownEmotion";
    case ErrorCode::kUnmappedTag: return "UnmappedTag";
    case ErrorCode::kMappingParse: return "MappingParse";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kStatsFormat: return "StatsFormat";
    case ErrorCode::kNoMoodForEmotion: return "NoMoodForEmotion";
    case ErrorCode::kEmptyDistribution: return "EmptyDistribution";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kBackendRejected: return "BackendRejected";
    case ErrorCode::kBadAudio: return "BadAudio";
    case ErrorCode::kAllSilent: return "AllSilent";
    case ErrorCode::kSilentClip: return "SilentClip";
    case ErrorCode::kRateMismatch: return "RateMismatch";
    case ErrorCode::kOverlapTooLong: return "OverlapTooLong";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kBadHeader: return "BadHeader";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNoPositives: return "NoPositives";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kNoMappableTags: return "NoMappableTags";
    case ErrorCode::kGenerationFailed: return "GenerationFailed";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace musmed
