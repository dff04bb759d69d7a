// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_BSS_EVAL_H_
#define SEPKIT_BSS_EVAL_H_

#include <cstddef>
#include <vector>

#include "sepkit/audio.h"

namespace sepkit {

inline constexpr std::size_t kMaxBssSources = 6;

// Values are indexed by estimate; estimate i is paired with reference
// permutation[i].
struct BssEvalResult {
  std::vector<double> sdr;
  std::vector<double> sir;
  std::vector<double> sar;
  std::vector<std::size_t> permutation;
};

// Energy split of one estimate against one candidate reference.
struct BssDecomposition {
  std::vector<double> target;
  std::vector<double> interference;
  std::vector<double> artifact;
};

// Source-image decomposition with time-invariant distortion filters of
// `filter_len` taps. Signals are zero padded to N + filter_len - 1 so that
// the projection Gram matrices are exactly Toeplitz.
BssDecomposition BssDecompose(std::span<const double> est,
                              const std::vector<std::vector<double>>& refs, std::size_t target,
                              std::size_t filter_len);

// Picks the pairing that maximizes mean SDR over all S! candidates (S <= 6).
BssEvalResult BssEval(const std::vector<Waveform>& ests, const std::vector<Waveform>& refs,
                      std::size_t filter_len = 512);

}  // namespace sepkit

#endif  // SEPKIT_BSS_EVAL_H_
