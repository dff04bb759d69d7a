// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_OBJECTIVES_H_
#define SEPKIT_OBJECTIVES_H_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "sepkit/audio.h"
#include "sepkit/masks.h"
#include "sepkit/stft.h"

namespace sepkit {

// Scalar training-style objectives. Nothing here computes gradients.

struct LossValue {
  double value = 0.0;
  // Pairwise losses (estimate row, reference column); empty for MixIT.
  Eigen::MatrixXd per_pair;
  // PIT: estimate i is matched with reference permutation[i].
  // MixIT: estimate i is assigned to mixture permutation[i] (0 or 1).
  std::vector<std::size_t> permutation;
};

enum class MaskLossKind { kMse, kCrossEntropy };
enum class SpectrumDomain { kMagnitude, kComplex };

inline constexpr std::size_t kMaxPitSources = 8;
inline constexpr std::size_t kMaxMixitSources = 8;

// mse: mean (est - ref)^2. ce: mean binary cross entropy with est clamped to
// [1e-7, 1 - 1e-7]; ref must lie in [0, 1].
double MaskLoss(const TimeFreqMask& est, const TimeFreqMask& ref, MaskLossKind kind);

// magnitude: mean (|est| - |ref|)^2, complex: mean |est - ref|^2.
double SignalApproxLoss(const ComplexSpectrogram& est, const ComplexSpectrogram& ref,
                        SpectrumDomain domain);

// -SI-SNR in dB, so a perfect estimate scores -120.
double SiSnrLoss(const Waveform& est, const Waveform& ref);

// Exhaustive search over S! pairings (S <= 8).
LossValue PitResolve(const Eigen::MatrixXd& loss_matrix);

// Mixture invariant objective over two mixtures: each estimate is assigned
// to exactly one mixture; value is the mean SI-SNR loss of the two
// remixes under the best of the 2^M assignments.
LossValue MixitLoss(const std::vector<Waveform>& ests, const std::vector<Waveform>& mixtures);

}  // namespace sepkit

#endif  // SEPKIT_OBJECTIVES_H_
