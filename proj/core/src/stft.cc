// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sepkit/stft.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.h"
#include "sepkit/error.h"

namespace sepkit {
namespace {

constexpr double kMinWindowSum = 1e-11;

// Reflect without repeating the edge sample, folding as often as needed.
std::size_t ReflectIndex(long i, long n) {
  if (n == 1) return 0;
  const long period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return std::size_t(i < n ? i : period - i);
}

// Sum over frames of g(n - t * hop) on the padded time axis.
std::vector<double> OverlapSum(const std::vector<double>& g, std::size_t frames,
                               std::size_t hop, std::size_t length) {
  std::vector<double> sum(length, 0.0);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t n = 0; n < g.size() && t * hop + n < length; ++n)
      sum[t * hop + n] += g[n];
  return sum;
}

}  // namespace

std::vector<double> MakeWindow(WindowType type, std::size_t n_fft) {
  std::vector<double> w(n_fft);
  for (std::size_t n = 0; n < n_fft; ++n) {
    double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(n) / double(n_fft));
    w[n] = type == WindowType::kHann ? hann : std::sqrt(hann);
  }
  return w;
}

void CheckStftConfig(const StftConfig& cfg) {
  if (cfg.n_fft < 16 || (cfg.n_fft & (cfg.n_fft - 1)) != 0)
    throw Error(Errc::kInvalidConfig, "n_fft must be a power of two >= 16");
  if (cfg.hop == 0 || cfg.hop > cfg.n_fft)
    throw Error(Errc::kInvalidConfig, "hop must be in (0, n_fft]");
}

bool ValidateConfig(const StftConfig& cfg) {
  try {
    CheckStftConfig(cfg);
  } catch (const Error&) {
    return false;
  }
  // Both synthesis modes normalize by the overlap-added hann window (the
  // sqrt-hann window is applied twice).
  auto hann = MakeWindow(WindowType::kHann, cfg.n_fft);
  double lo = INFINITY, hi = 0.0;
  for (std::size_t phase = 0; phase < cfg.hop; ++phase) {
    double s = 0.0;
    for (std::size_t n = phase; n < cfg.n_fft; n += cfg.hop) s += hann[n];
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return hi > 0.0 && (hi - lo) / hi <= 1e-10;
}

ComplexSpectrogram::ComplexSpectrogram(std::size_t frames, std::size_t channels,
                                       const StftConfig& cfg, int sample_rate,
                                       std::size_t original_length)
    : frames_(frames),
      bins_(cfg.NumBins()),
      channels_(channels),
      config_(cfg),
      sample_rate_(sample_rate),
      original_length_(original_length),
      values_(frames * cfg.NumBins() * channels) {}

ComplexSpectrogram ComplexSpectrogram::EmptyLike(std::size_t channels) const {
  return ComplexSpectrogram(frames_, channels, config_, sample_rate_, original_length_);
}

ComplexSpectrogram ComplexSpectrogram::SelectChannel(std::size_t c) const {
  if (c >= channels_) throw Error(Errc::kOutOfRange, "channel index");
  ComplexSpectrogram out = EmptyLike(1);
  for (std::size_t t = 0; t < frames_; ++t)
    for (std::size_t f = 0; f < bins_; ++f) out.at(t, f, 0) = at(t, f, c);
  return out;
}

std::size_t NumFrames(std::size_t num_samples, const StftConfig& cfg) {
  const std::size_t padded = cfg.center ? num_samples + cfg.n_fft : num_samples;
  if (padded < cfg.n_fft) return 0;
  return 1 + (padded - cfg.n_fft) / cfg.hop;
}

ComplexSpectrogram Analyze(const Waveform& w, const StftConfig& cfg) {
  CheckStftConfig(cfg);
  w.Validate();
  const std::size_t n = w.NumSamples();
  if (n == 0) throw Error(Errc::kTooShort, "empty waveform");
  if (!cfg.center && n < cfg.n_fft)
    throw Error(Errc::kTooShort, "waveform shorter than n_fft without centering");

  const std::size_t pad = cfg.center ? cfg.n_fft / 2 : 0;
  const std::size_t frames = NumFrames(n, cfg);
  const auto window = MakeWindow(cfg.window, cfg.n_fft);

  ComplexSpectrogram spec(frames, w.NumChannels(), cfg, w.sample_rate, n);
  std::vector<double> frame(cfg.n_fft);
  for (std::size_t c = 0; c < w.NumChannels(); ++c) {
    const auto& x = w.data[c];
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t k = 0; k < cfg.n_fft; ++k) {
        long idx = long(t * cfg.hop + k) - long(pad);
        frame[k] = window[k] * x[ReflectIndex(idx, long(n))];
      }
      auto bins = internal::Rfft(frame, cfg.n_fft);
      for (std::size_t f = 0; f < bins.size(); ++f) spec.at(t, f, c) = bins[f];
    }
  }
  return spec;
}

Waveform Synthesize(const ComplexSpectrogram& spec) {
  const StftConfig& cfg = spec.config();
  CheckStftConfig(cfg);
  const std::size_t frames = spec.NumFrames();
  const std::size_t pad = cfg.center ? cfg.n_fft / 2 : 0;
  const std::size_t out_len = spec.original_length();
  const std::size_t total = std::max(out_len + 2 * pad, (frames ? (frames - 1) * cfg.hop : 0) + cfg.n_fft);

  const auto window = MakeWindow(cfg.window, cfg.n_fft);
  // Normalizer: the product of analysis and synthesis windows, overlap-added.
  std::vector<double> synth_window(cfg.n_fft, 1.0);
  std::vector<double> product = window;
  if (cfg.window == WindowType::kSqrtHann) {
    synth_window = window;
    for (std::size_t k = 0; k < cfg.n_fft; ++k) product[k] = window[k] * window[k];
  }
  const auto norm = OverlapSum(product, frames, cfg.hop, total);
  for (std::size_t n = pad; n < pad + out_len; ++n)
    if (norm[n] < kMinWindowSum)
      throw Error(Errc::kNumerical, "window sum vanishes at sample " + std::to_string(n - pad) +
                                        " (config is not overlap-add invertible)");

  Waveform out(spec.sample_rate(), spec.NumChannels(), out_len);
  std::vector<double> acc(total);
  std::vector<cdouble> bins(spec.NumBins());
  for (std::size_t c = 0; c < spec.NumChannels(); ++c) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t f = 0; f < bins.size(); ++f) bins[f] = spec.at(t, f, c);
      // Imaginary parts of DC and Nyquist do not exist in a real signal.
      bins.front().imag(0.0);
      bins.back().imag(0.0);
      auto frame = internal::Irfft(bins, cfg.n_fft);
      for (std::size_t k = 0; k < cfg.n_fft; ++k)
        acc[t * cfg.hop + k] += synth_window[k] * frame[k];
    }
    for (std::size_t n = 0; n < out_len; ++n) out.data[c][n] = acc[pad + n] / norm[pad + n];
  }
  return out;
}

}  // namespace sepkit
