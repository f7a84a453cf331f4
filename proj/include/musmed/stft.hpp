#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace musmed {

// Real-input FFT of a fixed size (FFTW-backed). inverse() includes the 1/n scale.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const;
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Periodic Hann, the COLA-compatible variant.
std::vector<double> hann_window(std::size_t n);

// Frame layout: the signal is preceded by (window - hop) zeros so that every
// input sample is covered by window/hop frames, and frames continue until the
// last sample is covered.
struct StftLayout {
  std::size_t window = 1024;
  std::size_t hop = 256;
  std::size_t length = 0;  // input samples
  std::size_t pad = 0;
  std::size_t frames = 0;

  std::size_t bins() const { return window / 2 + 1; }
};

StftLayout make_stft_layout(std::size_t length, std::size_t window = 1024, std::size_t hop = 256);

class StftAnalyzer {
 public:
  StftAnalyzer(std::span<const float> signal, const StftLayout& layout);
  const StftLayout& layout() const { return layout_; }
  // Windowed spectrum of frame f into out (size bins()).
  void frame(std::size_t f, std::span<std::complex<double>> out);

 private:
  std::span<const float> signal_;
  StftLayout layout_;
  std::vector<double> window_;
  std::vector<double> buffer_;
  RealFft fft_;
};

// Weighted overlap-add: each frame is windowed again on synthesis and the sum
// is divided by the accumulated squared window per sample.
class StftSynthesizer {
 public:
  explicit StftSynthesizer(const StftLayout& layout);
  void add(std::size_t f, std::span<const std::complex<double>> spectrum);
  std::vector<float> finish() const;

 private:
  StftLayout layout_;
  std::vector<double> window_;
  std::vector<double> buffer_;
  std::vector<double> accum_;
  std::vector<double> weight_;
  RealFft fft_;
};

struct Spectrogram {
  StftLayout layout;
  std::vector<std::complex<double>> data;  // frames x bins, frame-major

  std::span<std::complex<double>> frame(std::size_t f) {
    return {data.data() + f * layout.bins(), layout.bins()};
  }
  std::span<const std::complex<double>> frame(std::size_t f) const {
    return {data.data() + f * layout.bins(), layout.bins()};
  }
};

Spectrogram stft(std::span<const float> signal, std::size_t window = 1024, std::size_t hop = 256);
std::vector<float> istft(const Spectrogram& spec);

}  // namespace musmed
