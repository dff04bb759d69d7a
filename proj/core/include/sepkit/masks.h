// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_MASKS_H_
#define SEPKIT_MASKS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sepkit/stft.h"

namespace sepkit {

enum class MaskKind { kIbm, kIrm, kIam, kPsm };

std::optional<MaskKind> ParseMaskKind(const std::string& name);
std::string MaskKindName(MaskKind kind);

// Real-valued gain per (frame, bin).
struct TimeFreqMask {
  std::size_t frames = 0;
  std::size_t bins = 0;
  MaskKind kind = MaskKind::kIrm;
  double clip = 10.0;
  std::vector<double> values;

  TimeFreqMask() = default;
  TimeFreqMask(std::size_t t, std::size_t f, MaskKind k, double c = 10.0, double fill = 0.0)
      : frames(t), bins(f), kind(k), clip(c), values(t * f, fill) {}

  double& at(std::size_t t, std::size_t f) { return values[t * bins + f]; }
  double at(std::size_t t, std::size_t f) const { return values[t * bins + f]; }
};

inline constexpr double kMaskEps = 1e-8;
inline constexpr double kDefaultMaskClip = 10.0;

// Ideal masks from single-channel source spectra and the single-channel
// mixture spectrum:
//   IBM_i = 1 for the loudest source (lowest index on ties)
//   IRM_i = |S_i| / (sum_j |S_j| + eps)
//   IAM_i = min(|S_i| / (|Y| + eps), clip)
//   PSM_i = clamp(|S_i| / (|Y| + eps) * cos(angle Y - angle S_i), -clip, clip)
std::vector<TimeFreqMask> ComputeOracleMasks(const std::vector<ComplexSpectrogram>& sources,
                                             const ComplexSpectrogram& mixture, MaskKind kind,
                                             double clip = kDefaultMaskClip);

// Element-wise product, broadcast over channels.
ComplexSpectrogram ApplyMask(const ComplexSpectrogram& mixture, const TimeFreqMask& mask);

}  // namespace sepkit

#endif  // SEPKIT_MASKS_H_
