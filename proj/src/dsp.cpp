#include "musmed/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "musmed/error.hpp"
#include "musmed/stft.hpp"

namespace musmed {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

std::size_t ms_to_samples(double ms, int rate) {
  return static_cast<std::size_t>(std::llround(ms * rate / 1000.0));
}

}  // namespace

double db_to_gain(double db) { return std::pow(10.0, db / 20.0); }
double gain_to_db(double gain) { return 20.0 * std::log10(gain); }

void DspConfig::validate() const {
  require(std::isfinite(trim_threshold_dbfs), "trim_threshold_dbfs must be finite");
  require(trim_frame_ms > 0.0 && trim_hop_ms > 0.0, "trim frame and hop must be positive");
  require(std::isfinite(normalize_peak_dbfs) && normalize_peak_dbfs <= 0.0,
          "normalize_peak_dbfs must be finite and <= 0");
  require(crossfade_fraction > 0.0 && crossfade_fraction < 0.5,
          "crossfade_fraction must lie in (0, 0.5)");
  require(highpass_cutoff_hz > 0.0 && std::isfinite(highpass_cutoff_hz), "highpass cutoff must be positive");
  require(highpass_q > 0.0 && std::isfinite(highpass_q), "highpass_q must be positive");
  require(gate_percentile >= 0.0 && gate_percentile <= 100.0, "gate_percentile must lie in [0, 100]");
  require(gate_threshold_factor >= 1.0 && std::isfinite(gate_threshold_factor),
          "gate_threshold_factor must be >= 1");
  require(gate_floor > 0.0 && gate_floor <= 1.0, "gate_floor must lie in (0, 1]");
}

GateParams DspConfig::gate_params() const {
  GateParams p;
  p.percentile = gate_percentile;
  p.threshold_factor = gate_threshold_factor;
  p.floor_gain = gate_floor;
  return p;
}

TrimBounds find_trim_bounds(const AudioClip& clip, const DspConfig& config) {
  const std::size_t n = clip.samples.size();
  if (n < static_cast<std::size_t>(clip.sample_rate)) {
    throw Error(ErrorCode::kTooShort, "trim_silence needs at least 1 s of audio");
  }
  const std::size_t frame = std::max<std::size_t>(1, ms_to_samples(config.trim_frame_ms, clip.sample_rate));
  const std::size_t hop = std::max<std::size_t>(1, ms_to_samples(config.trim_hop_ms, clip.sample_rate));
  const double threshold = db_to_gain(config.trim_threshold_dbfs);

  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + frame <= n; s += hop) starts.push_back(s);
  if (starts.empty() || starts.back() + frame < n) starts.push_back(n >= frame ? n - frame : 0);

  auto loud = [&](std::size_t s) {
    const std::size_t e = std::min(n, s + frame);
    double acc = 0.0;
    for (std::size_t i = s; i < e; ++i) acc += static_cast<double>(clip.samples[i]) * clip.samples[i];
    return std::sqrt(acc / static_cast<double>(e - s)) >= threshold;
  };

  std::size_t first = starts.size();
  for (std::size_t k = 0; k < starts.size(); ++k) {
    if (loud(starts[k])) {
      first = k;
      break;
    }
  }
  if (first == starts.size()) throw Error(ErrorCode::kAllSilent, "no frame above threshold");
  std::size_t last = first;
  for (std::size_t k = starts.size(); k-- > first;) {
    if (loud(starts[k])) {
      last = k;
      break;
    }
  }
  TrimBounds b{starts[first], std::min(n, starts[last] + frame)};
  if (b.end - b.start < static_cast<std::size_t>(clip.sample_rate)) {
    throw Error(ErrorCode::kAllSilent, "less than 1 s of non-silent audio");
  }
  return b;
}

AudioClip trim_silence(const AudioClip& clip, const DspConfig& config) {
  const auto b = find_trim_bounds(clip, config);
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.assign(clip.samples.begin() + static_cast<std::ptrdiff_t>(b.start),
                     clip.samples.begin() + static_cast<std::ptrdiff_t>(b.end));
  return out;
}

AudioClip normalize_peak(const AudioClip& clip, double target_dbfs) {
  const float peak = peak_abs(clip);
  if (peak == 0.0f) throw Error(ErrorCode::kSilentClip, "cannot normalize an all-zero clip");
  const double scale = db_to_gain(target_dbfs) / static_cast<double>(peak);
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.resize(clip.samples.size());
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    out.samples[i] = static_cast<float>(static_cast<double>(clip.samples[i]) * scale);
  }
  return out;
}

std::size_t crossfade_overlap(std::size_t previous_length, double fraction) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(previous_length)));
}

AudioClip crossfade_concat(std::span<const AudioClip> clips, double fraction) {
  if (clips.empty()) throw Error(ErrorCode::kInvalidArgument, "no clips to concatenate");
  require(fraction >= 0.0 && fraction < 1.0, "crossfade fraction must lie in [0, 1)");

  std::size_t total = clips[0].samples.size();
  for (std::size_t i = 1; i < clips.size(); ++i) {
    if (clips[i].sample_rate != clips[0].sample_rate) {
      throw Error(ErrorCode::kRateMismatch, "clip " + std::to_string(i) + " has rate " +
                                                std::to_string(clips[i].sample_rate));
    }
    const std::size_t overlap = crossfade_overlap(clips[i - 1].samples.size(), fraction);
    if (overlap > clips[i].samples.size() || overlap > total) {
      throw Error(ErrorCode::kOverlapTooLong, "overlap of " + std::to_string(overlap) +
                                                  " samples exceeds clip " + std::to_string(i));
    }
    total += clips[i].samples.size() - overlap;
  }

  AudioClip out;
  out.sample_rate = clips[0].sample_rate;
  out.samples.reserve(total);
  out.samples.insert(out.samples.end(), clips[0].samples.begin(), clips[0].samples.end());
  for (std::size_t i = 1; i < clips.size(); ++i) {
    const auto& in = clips[i].samples;
    const std::size_t overlap = crossfade_overlap(clips[i - 1].samples.size(), fraction);
    const std::size_t base = out.samples.size() - overlap;
    for (std::size_t j = 0; j < overlap; ++j) {
      const double t = (static_cast<double>(j) + 0.5) / static_cast<double>(overlap);
      const double fade_out = std::cos(0.5 * std::numbers::pi * t);
      const double fade_in = std::sin(0.5 * std::numbers::pi * t);
      out.samples[base + j] = static_cast<float>(static_cast<double>(out.samples[base + j]) * fade_out +
                                                 static_cast<double>(in[j]) * fade_in);
    }
    out.samples.insert(out.samples.end(), in.begin() + static_cast<std::ptrdiff_t>(overlap), in.end());
  }
  return out;
}

BiquadCoefficients highpass_coefficients(double sample_rate, double cutoff_hz, double q) {
  require(cutoff_hz > 0.0 && cutoff_hz < sample_rate / 2.0, "cutoff must lie in (0, Nyquist)");
  require(q > 0.0, "q must be positive");
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double cw = std::cos(w0);
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  return {
      (1.0 + cw) / 2.0 / a0,
      -(1.0 + cw) / a0,
      (1.0 + cw) / 2.0 / a0,
      -2.0 * cw / a0,
      (1.0 - alpha) / a0,
  };
}

AudioClip biquad_filter(const AudioClip& clip, const BiquadCoefficients& c) {
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.resize(clip.samples.size());
  // Direct form I, double state.
  double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    const double x0 = clip.samples[i];
    const double y0 = c.b0 * x0 + c.b1 * x1 + c.b2 * x2 - c.a1 * y1 - c.a2 * y2;
    x2 = x1;
    x1 = x0;
    y2 = y1;
    y1 = y0;
    out.samples[i] = static_cast<float>(y0);
  }
  return out;
}

AudioClip highpass(const AudioClip& clip, double cutoff_hz, double q) {
  return biquad_filter(clip, highpass_coefficients(clip.sample_rate, cutoff_hz, q));
}

double percentile(std::span<float> values, double pct) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "percentile of empty set");
  require(pct >= 0.0 && pct <= 100.0, "percentile must lie in [0, 100]");
  const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
  const double lo_value = values[lo];
  if (frac == 0.0 || lo + 1 >= values.size()) return lo_value;
  // The next order statistic is the minimum of the upper partition.
  const double hi_value =
      *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
  return lo_value + frac * (hi_value - lo_value);
}

AudioClip spectral_gate(const AudioClip& clip, const GateParams& params) {
  if (clip.samples.size() < params.window) {
    throw Error(ErrorCode::kTooShort, "clip shorter than the STFT window");
  }
  require(params.threshold_factor >= 0.0, "threshold factor must be non-negative");
  require(params.floor_gain >= 0.0 && params.floor_gain <= 1.0, "floor gain must lie in [0, 1]");
  require(params.smooth_bins % 2 == 1 && params.smooth_frames % 2 == 1,
          "smoothing extents must be odd");

  const auto layout = make_stft_layout(clip.samples.size(), params.window, params.hop);
  const std::size_t frames = layout.frames;
  const std::size_t bins = layout.bins();
  std::vector<std::complex<double>> spectrum(bins);

  // Pass 1: magnitudes and per-bin noise floor.
  std::vector<float> mags(frames * bins);
  {
    StftAnalyzer analyzer(clip.samples, layout);
    for (std::size_t f = 0; f < frames; ++f) {
      analyzer.frame(f, spectrum);
      for (std::size_t b = 0; b < bins; ++b) mags[f * bins + b] = static_cast<float>(std::abs(spectrum[b]));
    }
  }
  std::vector<double> threshold(bins);
  {
    std::vector<float> column(frames);
    for (std::size_t b = 0; b < bins; ++b) {
      for (std::size_t f = 0; f < frames; ++f) column[f] = mags[f * bins + b];
      threshold[b] = params.threshold_factor * percentile(column, params.percentile);
    }
  }
  std::vector<std::uint8_t> raw(frames * bins);
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t b = 0; b < bins; ++b) {
      raw[f * bins + b] = static_cast<double>(mags[f * bins + b]) > threshold[b] ? 1 : 0;
    }
  }
  mags.clear();
  mags.shrink_to_fit();

  // Pass 2: box-smoothed mask (truncated at the edges) applied during resynthesis.
  const std::size_t half_f = params.smooth_frames / 2;
  const std::size_t half_b = params.smooth_bins / 2;
  std::vector<int> column_sum(bins, 0);  // raw mask summed over the frame window
  for (std::size_t f = 0; f < std::min(frames, half_f); ++f) {
    for (std::size_t b = 0; b < bins; ++b) column_sum[b] += raw[f * bins + b];
  }
  std::vector<double> gain(bins);
  StftAnalyzer analyzer(clip.samples, layout);
  StftSynthesizer synth(layout);
  for (std::size_t f = 0; f < frames; ++f) {
    if (f + half_f < frames) {
      for (std::size_t b = 0; b < bins; ++b) column_sum[b] += raw[(f + half_f) * bins + b];
    }
    if (f > half_f) {
      for (std::size_t b = 0; b < bins; ++b) column_sum[b] -= raw[(f - half_f - 1) * bins + b];
    }
    const std::size_t f_lo = f >= half_f ? f - half_f : 0;
    const std::size_t f_hi = std::min(frames - 1, f + half_f);
    const double frame_span = static_cast<double>(f_hi - f_lo + 1);
    for (std::size_t b = 0; b < bins; ++b) {
      const std::size_t b_lo = b >= half_b ? b - half_b : 0;
      const std::size_t b_hi = std::min(bins - 1, b + half_b);
      int sum = 0;
      for (std::size_t k = b_lo; k <= b_hi; ++k) sum += column_sum[k];
      const double m = sum / (frame_span * static_cast<double>(b_hi - b_lo + 1));
      gain[b] = m + (1.0 - m) * params.floor_gain;
    }
    analyzer.frame(f, spectrum);
    for (std::size_t b = 0; b < bins; ++b) spectrum[b] *= gain[b];
    synth.add(f, spectrum);
  }

  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples = synth.finish();
  return out;
}

AudioClip finalize_session_audio(const AudioClip& assembled, const DspConfig& config) {
  const auto filtered = highpass(assembled, config.highpass_cutoff_hz, config.highpass_q);
  auto out = spectral_gate(filtered, config.gate_params());
  // Correlated clips add in amplitude across an overlap and can pass full scale.
  if (peak_abs(out) > 1.0f) out = normalize_peak(out, config.normalize_peak_dbfs);
  return out;
}

}  // namespace musmed
