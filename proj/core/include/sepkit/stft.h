// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_STFT_H_
#define SEPKIT_STFT_H_

#include <complex>
#include <cstddef>
#include <vector>

#include "sepkit/audio.h"

namespace sepkit {

using cdouble = std::complex<double>;

enum class WindowType { kHann, kSqrtHann };

struct StftConfig {
  std::size_t n_fft = 512;
  std::size_t hop = 128;
  WindowType window = WindowType::kHann;
  // Reflect-pad n_fft / 2 samples on both ends before framing.
  bool center = true;

  std::size_t NumBins() const { return n_fft / 2 + 1; }
  bool operator==(const StftConfig&) const = default;
};

// Periodic window of length n_fft.
std::vector<double> MakeWindow(WindowType type, std::size_t n_fft);

// Throws kInvalidConfig unless n_fft is a power of two >= 16 and
// 0 < hop <= n_fft.
void CheckStftConfig(const StftConfig& cfg);

// True iff the squared-window overlap-add (hann for both window types) is
// constant to within 1e-10 relative deviation.
bool ValidateConfig(const StftConfig& cfg);

// One-sided spectra, shape frames x bins x channels.
class ComplexSpectrogram {
 public:
  ComplexSpectrogram() = default;
  ComplexSpectrogram(std::size_t frames, std::size_t channels, const StftConfig& cfg,
                     int sample_rate, std::size_t original_length);

  std::size_t NumFrames() const { return frames_; }
  std::size_t NumBins() const { return bins_; }
  std::size_t NumChannels() const { return channels_; }
  const StftConfig& config() const { return config_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t original_length() const { return original_length_; }

  cdouble& at(std::size_t t, std::size_t f, std::size_t c) {
    return values_[(t * bins_ + f) * channels_ + c];
  }
  const cdouble& at(std::size_t t, std::size_t f, std::size_t c) const {
    return values_[(t * bins_ + f) * channels_ + c];
  }
  std::vector<cdouble>& values() { return values_; }
  const std::vector<cdouble>& values() const { return values_; }

  // Zero spectrogram with the same shape and metadata but `channels` channels.
  ComplexSpectrogram EmptyLike(std::size_t channels) const;
  ComplexSpectrogram SelectChannel(std::size_t c) const;
  bool SameGrid(const ComplexSpectrogram& other) const {
    return frames_ == other.frames_ && bins_ == other.bins_;
  }

 private:
  std::size_t frames_ = 0;
  std::size_t bins_ = 0;
  std::size_t channels_ = 0;
  StftConfig config_;
  int sample_rate_ = 0;
  std::size_t original_length_ = 0;
  std::vector<cdouble> values_;
};

// Frame count: 1 + (N' - n_fft) / hop with N' = N + n_fft when centered.
std::size_t NumFrames(std::size_t num_samples, const StftConfig& cfg);

ComplexSpectrogram Analyze(const Waveform& w, const StftConfig& cfg);

// Overlap-add inverse. Output has original_length samples. Throws
// kNumerical when the window sum vanishes inside the output span.
Waveform Synthesize(const ComplexSpectrogram& spec);

}  // namespace sepkit

#endif  // SEPKIT_STFT_H_
