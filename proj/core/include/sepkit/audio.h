// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_AUDIO_H_
#define SEPKIT_AUDIO_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace sepkit {

// Multichannel real signal, stored channel-major (data[c][n]).
struct Waveform {
  int sample_rate = 16000;
  std::vector<std::vector<double>> data;

  Waveform() = default;
  Waveform(int rate, std::size_t channels, std::size_t samples)
      : sample_rate(rate), data(channels, std::vector<double>(samples, 0.0)) {}
  static Waveform Mono(int rate, std::vector<double> samples);

  std::size_t NumChannels() const { return data.size(); }
  std::size_t NumSamples() const { return data.empty() ? 0 : data[0].size(); }
  std::span<const double> Channel(std::size_t c) const { return data[c]; }
  std::span<double> Channel(std::size_t c) { return data[c]; }
  // Single-channel view of channel c as its own waveform.
  Waveform Select(std::size_t c) const;

  // Throws kShapeMismatch / kInvalidArgument when the invariants are broken.
  void Validate() const;

  bool operator==(const Waveform&) const = default;
};

enum class WavEncoding { kPcm16, kFloat32 };

// Reads RIFF/WAVE PCM16 or IEEE float32. PCM samples are scaled by 1/32768.
Waveform ReadWav(const std::filesystem::path& path);

// PCM16 clamps to [-1, 32767/32768] and rounds to nearest.
void WriteWav(const std::filesystem::path& path, const Waveform& w,
              WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace sepkit

#endif  // SEPKIT_AUDIO_H_
