// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_SIMULATE_H_
#define SEPKIT_SIMULATE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "sepkit/audio.h"

namespace sepkit {

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard. Uniform doubles take the top 53
// bits; normals come from the Box-Muller pair (cos branch first, sin branch
// cached for the next call). No std::*_distribution is used because their
// algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }
  // [0, 1)
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  double Normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

using Point3 = std::array<double, 3>;

struct RirSpec {
  Point3 room = {6.0, 5.0, 3.0};
  Point3 source = {2.0, 2.0, 1.5};
  std::vector<Point3> mics = {{3.0, 2.5, 1.5}};
  double t60 = 0.0;            // seconds, 0 is anechoic
  std::size_t max_order = 1000;
  int fs = 16000;
  double sound_speed = 343.0;
};

inline constexpr std::size_t kRirSincTaps = 81;

// Sabine absorption 0.1611 V / (S t60). Throws kInvalidConfig above 1.
double SabineAbsorption(const RirSpec& spec);
void CheckRirSpec(const RirSpec& spec);
std::size_t RirLength(const RirSpec& spec);

// Allen-Berkley image method with uniform wall reflection sqrt(1 - alpha).
// Each image contributes prod(beta) / (4 pi dist) at dist / c * fs samples
// through an 81-tap Hann-windowed sinc. One mono waveform per microphone.
std::vector<Waveform> GenerateRir(const RirSpec& spec);

// Linear convolution truncated to the length of `w` (wet aligned with dry).
Waveform Convolve(const Waveform& w, const Waveform& rir);

struct MixResult {
  Waveform mixture;
  Waveform scaled_noise;
  double gain = 1.0;
};

// Scales noise so that 10 log10(P_speech / P_noise) == snr_db, powers taken
// over all channels and samples.
MixResult MixAtSnr(const Waveform& speech, const Waveform& noise, double snr_db);

// sox-style speed change: resample by 1 / factor at an unchanged nominal
// rate. factor must lie in [0.5, 2].
Waveform SpeedPerturb(const Waveform& w, double factor);

enum class NoiseKind { kWhite };

// Standard normal samples scaled by 0.1.
Waveform GenNoise(std::size_t length, std::size_t channels, uint64_t seed,
                  NoiseKind kind = NoiseKind::kWhite, int sample_rate = 16000);

// Harmonic, formant-shaped, syllable-modulated noise standing in for a
// talker: random base f0 per seed, voiced and fricative syllables separated
// by short pauses. RMS is normalized to 0.05.
Waveform SynthSpeech(std::size_t length, uint64_t seed, int sample_rate = 16000);

}  // namespace sepkit

#endif  // SEPKIT_SIMULATE_H_
