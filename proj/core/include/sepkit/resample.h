// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_RESAMPLE_H_
#define SEPKIT_RESAMPLE_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace sepkit {

inline constexpr std::size_t kResamplerTapsPerPhase = 64;
inline constexpr double kResamplerKaiserBeta = 14.77;

// Rational up/down resampler with a Kaiser-windowed sinc kernel. Each
// output sample is a 64-tap dot product with one of `up` precomputed
// phases. Cutoff is min(1, up / down) of the input Nyquist.
class PolyphaseResampler {
 public:
  PolyphaseResampler(std::size_t up, std::size_t down);

  std::size_t up() const { return up_; }
  std::size_t down() const { return down_; }
  // ceil(n * up / down)
  std::size_t OutputLength(std::size_t n) const;
  std::vector<double> Process(std::span<const double> input) const;

 private:
  std::size_t up_;
  std::size_t down_;
  std::vector<double> table_;  // up_ phases x 64 taps
};

// Best rational p/q with p, q <= max_term (continued-fraction convergents).
std::pair<std::size_t, std::size_t> RationalApproximation(double ratio,
                                                          std::size_t max_term = 1000);

std::vector<double> Resample(std::span<const double> input, int from_rate, int to_rate);

}  // namespace sepkit

#endif  // SEPKIT_RESAMPLE_H_
