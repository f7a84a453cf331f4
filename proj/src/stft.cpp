#include "musmed/stft.hpp"

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "musmed/error.hpp"

namespace musmed {
namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct RealFft::Impl {
  std::size_t n = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  explicit Impl(std::size_t size) : n(size) {
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard lock(planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(spec);
  }
};

RealFft::RealFft(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "FFT size must be at least 2");
  impl_ = std::make_unique<Impl>(n);
}
RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

std::size_t RealFft::size() const { return impl_->n; }

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  const auto n = impl_->n;
  if (in.size() != n || out.size() != n / 2 + 1) {
    throw Error(ErrorCode::kInvalidArgument, "FFT buffer size mismatch");
  }
  std::memcpy(impl_->real, in.data(), n * sizeof(double));
  fftw_execute(impl_->fwd);
  for (std::size_t k = 0; k < n / 2 + 1; ++k) out[k] = {impl_->spec[k][0], impl_->spec[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  const auto n = impl_->n;
  if (out.size() != n || in.size() != n / 2 + 1) {
    throw Error(ErrorCode::kInvalidArgument, "FFT buffer size mismatch");
  }
  for (std::size_t k = 0; k < n / 2 + 1; ++k) {
    impl_->spec[k][0] = in[k].real();
    impl_->spec[k][1] = in[k].imag();
  }
  fftw_execute(impl_->inv);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = impl_->real[i] * scale;
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  }
  return w;
}

StftLayout make_stft_layout(std::size_t length, std::size_t window, std::size_t hop) {
  if (window < 2 || hop == 0 || hop > window) {
    throw Error(ErrorCode::kInvalidArgument, "invalid STFT window/hop");
  }
  StftLayout l;
  l.window = window;
  l.hop = hop;
  l.length = length;
  l.pad = window - hop;
  l.frames = length == 0 ? 0 : (length + l.pad - 1) / hop + 1;
  return l;
}

StftAnalyzer::StftAnalyzer(std::span<const float> signal, const StftLayout& layout)
    : signal_(signal),
      layout_(layout),
      window_(hann_window(layout.window)),
      buffer_(layout.window),
      fft_(layout.window) {}

void StftAnalyzer::frame(std::size_t f, std::span<std::complex<double>> out) {
  const std::size_t start = f * layout_.hop;  // in padded coordinates
  for (std::size_t i = 0; i < layout_.window; ++i) {
    const std::size_t j = start + i;
    double x = 0.0;
    if (j >= layout_.pad && j - layout_.pad < signal_.size()) x = signal_[j - layout_.pad];
    buffer_[i] = x * window_[i];
  }
  fft_.forward(buffer_, out);
}

StftSynthesizer::StftSynthesizer(const StftLayout& layout)
    : layout_(layout),
      window_(hann_window(layout.window)),
      buffer_(layout.window),
      accum_(layout.frames == 0 ? 0 : (layout.frames - 1) * layout.hop + layout.window),
      weight_(accum_.size()),
      fft_(layout.window) {}

void StftSynthesizer::add(std::size_t f, std::span<const std::complex<double>> spectrum) {
  fft_.inverse(spectrum, buffer_);
  const std::size_t start = f * layout_.hop;
  for (std::size_t i = 0; i < layout_.window; ++i) {
    accum_[start + i] += buffer_[i] * window_[i];
    weight_[start + i] += window_[i] * window_[i];
  }
}

std::vector<float> StftSynthesizer::finish() const {
  std::vector<float> out(layout_.length);
  for (std::size_t i = 0; i < layout_.length; ++i) {
    const std::size_t j = i + layout_.pad;
    out[i] = weight_[j] > 1e-12 ? static_cast<float>(accum_[j] / weight_[j]) : 0.0f;
  }
  return out;
}

Spectrogram stft(std::span<const float> signal, std::size_t window, std::size_t hop) {
  Spectrogram s;
  s.layout = make_stft_layout(signal.size(), window, hop);
  s.data.resize(s.layout.frames * s.layout.bins());
  StftAnalyzer analyzer(signal, s.layout);
  for (std::size_t f = 0; f < s.layout.frames; ++f) analyzer.frame(f, s.frame(f));
  return s;
}

std::vector<float> istft(const Spectrogram& spec) {
  StftSynthesizer synth(spec.layout);
  for (std::size_t f = 0; f < spec.layout.frames; ++f) synth.add(f, spec.frame(f));
  return synth.finish();
}

}  // namespace musmed
