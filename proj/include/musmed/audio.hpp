#pragma once

#include <cstddef>
#include <vector>

namespace musmed {

inline constexpr int kCanonicalSampleRate = 32000;

// Mono float PCM.
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = kCanonicalSampleRate;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }

  bool operator==(const AudioClip&) const = default;
};

// Throws BadAudio on a non-positive rate, non-finite samples, or (when
// require_unit_range) any |sample| > 1.
void check_clip(const AudioClip& clip, bool require_unit_range = true);

float peak_abs(const AudioClip& clip);
double rms(const AudioClip& clip);

// The last `seconds` of the clip (the whole clip if shorter).
AudioClip tail(const AudioClip& clip, double seconds);

}  // namespace musmed
