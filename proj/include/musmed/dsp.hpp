#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "musmed/audio.hpp"

namespace musmed {

struct GateParams {
  double percentile = 10.0;       // noise floor per bin, across frames
  double threshold_factor = 4.0;  // alpha: keep bins above alpha * floor
  double floor_gain = 0.1;        // beta: residual gain for gated bins
  std::size_t smooth_bins = 3;
  std::size_t smooth_frames = 5;
  std::size_t window = 1024;
  std::size_t hop = 256;
};

struct DspConfig {
  double trim_threshold_dbfs = -50.0;
  double trim_frame_ms = 20.0;
  double trim_hop_ms = 10.0;
  double normalize_peak_dbfs = -1.0;
  bool normalize_before_trim = false;
  double crossfade_fraction = 0.25;
  double highpass_cutoff_hz = 40.0;
  double highpass_q = 0.7071;
  double gate_percentile = 10.0;
  double gate_threshold_factor = 4.0;
  double gate_floor = 0.1;

  // Throws InvalidArgument when a field is out of range.
  void validate() const;
  GateParams gate_params() const;
};

double db_to_gain(double db);
double gain_to_db(double gain);

struct TrimBounds {
  std::size_t start = 0;  // first kept sample
  std::size_t end = 0;    // one past the last kept sample
};

// Frame-RMS silence detection; see trim_silence.
TrimBounds find_trim_bounds(const AudioClip& clip, const DspConfig& config);

// Drops leading and trailing frames whose RMS is below the threshold.
// Throws TooShort for input under 1 s and AllSilent when less than 1 s survives.
AudioClip trim_silence(const AudioClip& clip, const DspConfig& config);

// Pure scaling so the absolute peak equals the target level.
// Throws SilentClip on all-zero input.
AudioClip normalize_peak(const AudioClip& clip, double target_dbfs);

// Overlap between clip i-1 and clip i: round(fraction * len(clip i-1)).
std::size_t crossfade_overlap(std::size_t previous_length, double fraction);

// Equal-power (cos/sin) crossfade concatenation.
// Throws RateMismatch and OverlapTooLong.
AudioClip crossfade_concat(std::span<const AudioClip> clips, double fraction);

struct BiquadCoefficients {
  double b0, b1, b2, a1, a2;  // normalized by a0
};

// Audio-EQ-cookbook second-order high-pass.
BiquadCoefficients highpass_coefficients(double sample_rate, double cutoff_hz, double q);

AudioClip biquad_filter(const AudioClip& clip, const BiquadCoefficients& c);
AudioClip highpass(const AudioClip& clip, double cutoff_hz, double q);

// Percentile-floor spectral gating with a smoothed binary mask; output has
// the input length. Throws TooShort when the clip is shorter than the window.
AudioClip spectral_gate(const AudioClip& clip, const GateParams& params);

// Linear-interpolated percentile (numpy "linear") of values; values is reordered.
double percentile(std::span<float> values, double pct);

// The full post-production chain on an assembled session: high-pass then gate.
// A result above full scale is brought back to normalize_peak_dbfs.
AudioClip finalize_session_audio(const AudioClip& assembled, const DspConfig& config);

}  // namespace musmed
