#include "musmed/audio.hpp"

#include <cmath>
#include <string>

#include "musmed/error.hpp"

namespace musmed {

void check_clip(const AudioClip& clip, bool require_unit_range) {
  if (clip.sample_rate <= 0) throw Error(ErrorCode::kBadAudio, "non-positive sample rate");
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    const float s = clip.samples[i];
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kBadAudio, "non-finite sample at " + std::to_string(i));
    }
    if (require_unit_range && std::fabs(s) > 1.0f) {
      throw Error(ErrorCode::kBadAudio, "sample out of [-1, 1] at " + std::to_string(i));
    }
  }
}

float peak_abs(const AudioClip& clip) {
  float peak = 0.0f;
  for (float s : clip.samples) peak = std::max(peak, std::fabs(s));
  return peak;
}

double rms(const AudioClip& clip) {
  if (clip.samples.empty()) return 0.0;
  double acc = 0.0;
  for (float s : clip.samples) acc += static_cast<double>(s) * s;
  return std::sqrt(acc / static_cast<double>(clip.samples.size()));
}

AudioClip tail(const AudioClip& clip, double seconds) {
  const auto want = static_cast<std::size_t>(std::llround(seconds * clip.sample_rate));
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  const std::size_t n = std::min(want, clip.samples.size());
  out.samples.assign(clip.samples.end() - static_cast<std::ptrdiff_t>(n), clip.samples.end());
  return out;
}

}  // namespace musmed
