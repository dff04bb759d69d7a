// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sepkit/simulate.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.h"
#include "sepkit/error.h"
#include "sepkit/resample.h"

namespace sepkit {
namespace {

double MeanPower(const Waveform& w) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& ch : w.data) {
    for (double x : ch) total += x * x;
    count += ch.size();
  }
  return count ? total / double(count) : 0.0;
}

}  // namespace

double Rng::Uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

double Rng::Normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - Uniform();  // (0, 1]
  const double u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Waveform Convolve(const Waveform& w, const Waveform& rir) {
  if (w.NumChannels() != 1 || rir.NumChannels() != 1)
    throw Error(Errc::kShapeMismatch, "convolution expects mono inputs");
  if (w.NumSamples() == 0 || rir.NumSamples() == 0)
    throw Error(Errc::kInvalidArgument, "convolution of an empty signal");
  auto full = internal::FftConvolve(w.data[0], rir.data[0]);
  full.resize(w.NumSamples());
  return Waveform::Mono(w.sample_rate, std::move(full));
}

MixResult MixAtSnr(const Waveform& speech, const Waveform& noise, double snr_db) {
  if (speech.NumChannels() != noise.NumChannels() || speech.NumSamples() != noise.NumSamples())
    throw Error(Errc::kShapeMismatch, "speech and noise shapes differ");
  if (!std::isfinite(snr_db)) throw Error(Errc::kInvalidArgument, "SNR must be finite");
  const double ps = MeanPower(speech), pn = MeanPower(noise);
  if (!(ps > 0.0) || !(pn > 0.0)) throw Error(Errc::kInvalidArgument, "zero-power mixing input");

  MixResult out;
  out.gain = std::sqrt(ps / (pn * std::pow(10.0, snr_db / 10.0)));
  out.scaled_noise = noise;
  out.mixture = speech;
  for (std::size_t c = 0; c < noise.NumChannels(); ++c) {
    for (std::size_t n = 0; n < noise.NumSamples(); ++n) {
      out.scaled_noise.data[c][n] *= out.gain;
      out.mixture.data[c][n] += out.scaled_noise.data[c][n];
    }
  }
  return out;
}

Waveform SpeedPerturb(const Waveform& w, double factor) {
  if (!(factor >= 0.5 && factor <= 2.0))
    throw Error(Errc::kOutOfRange, "speed factor must lie in [0.5, 2]");
  if (factor == 1.0) return w;
  auto [up, down] = RationalApproximation(1.0 / factor);
  PolyphaseResampler resampler(up, down);
  Waveform out;
  out.sample_rate = w.sample_rate;
  for (const auto& ch : w.data) out.data.push_back(resampler.Process(ch));
  return out;
}

Waveform GenNoise(std::size_t length, std::size_t channels, uint64_t seed, NoiseKind kind,
                  int sample_rate) {
  if (length == 0) throw Error(Errc::kInvalidArgument, "noise length must be positive");
  (void)kind;  // only white noise so far
  Rng rng(seed);
  Waveform w(sample_rate, channels, length);
  for (auto& ch : w.data)
    for (double& x : ch) x = 0.1 * rng.Normal();
  return w;
}

Waveform SynthSpeech(std::size_t length, uint64_t seed, int sample_rate) {
  Rng rng(seed);
  const double fs = double(sample_rate);
  const double base_f0 = rng.Uniform(90.0, 230.0);
  std::vector<double> out(length, 0.0);
  const double nyquist_limit = std::min(0.45 * fs, 7000.0);

  std::size_t pos = std::size_t(rng.Uniform(0.0, 0.1) * fs);
  while (pos < length) {
    if (rng.Uniform() < 0.2) {  // pause
      pos += std::size_t(rng.Uniform(0.08, 0.3) * fs);
      continue;
    }
    const std::size_t dur = std::min(std::size_t(rng.Uniform(0.12, 0.35) * fs), length - pos);
    const bool voiced = rng.Uniform() < 0.75;
    const double gain = rng.Uniform(0.5, 1.0);
    if (voiced) {
      const std::array<double, 3> formant = {rng.Uniform(300, 900), rng.Uniform(900, 2500),
                                             rng.Uniform(2400, 3500)};
      const std::array<double, 3> bandwidth = {rng.Uniform(60, 120), rng.Uniform(80, 160),
                                               rng.Uniform(120, 220)};
      const double f0_start = base_f0 * rng.Uniform(0.85, 1.15);
      const double f0_end = base_f0 * rng.Uniform(0.85, 1.15);
      const std::size_t harmonics = std::size_t(nyquist_limit / std::max(f0_start, f0_end));
      std::vector<double> phase(harmonics + 1);
      for (auto& p : phase) p = rng.Uniform(0.0, 2.0 * std::numbers::pi);
      for (std::size_t n = 0; n < dur; ++n) {
        const double frac = double(n) / double(dur);
        const double f0 = f0_start + (f0_end - f0_start) * frac;
        const double env = std::sin(std::numbers::pi * frac);
        double acc = 0.0;
        for (std::size_t h = 1; h <= harmonics; ++h) {
          const double freq = f0 * double(h);
          double shape = 0.0;
          for (std::size_t i = 0; i < 3; ++i) {
            const double z = (freq - formant[i]) / bandwidth[i];
            shape += 1.0 / std::sqrt(1.0 + z * z) / double(i + 1);
          }
          shape /= std::sqrt(double(h));
          phase[h] += 2.0 * std::numbers::pi * freq / fs;
          acc += shape * std::sin(phase[h]);
        }
        out[pos + n] += gain * env * acc;
      }
    } else {
      double prev = 0.0;
      for (std::size_t n = 0; n < dur; ++n) {
        const double frac = double(n) / double(dur);
        const double env = std::sin(std::numbers::pi * frac);
        const double white = rng.Normal();
        out[pos + n] += 0.3 * gain * env * (white - 0.9 * prev);
        prev = white;
      }
    }
    pos += dur;
  }

  double power = 0.0;
  for (double x : out) power += x * x;
  if (power > 0.0) {
    const double scale = 0.05 / std::sqrt(power / double(length));
    for (double& x : out) x *= scale;
  }
  return Waveform::Mono(sample_rate, std::move(out));
}

}  // namespace sepkit
