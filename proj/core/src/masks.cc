// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sepkit/masks.h"

#include <algorithm>
#include <cmath>

#include "sepkit/error.h"

namespace sepkit {

std::optional<MaskKind> ParseMaskKind(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char ch) { return std::toupper(ch); });
  if (up == "IBM") return MaskKind::kIbm;
  if (up == "IRM") return MaskKind::kIrm;
  if (up == "IAM") return MaskKind::kIam;
  if (up == "PSM") return MaskKind::kPsm;
  return std::nullopt;
}

std::string MaskKindName(MaskKind kind) {
  switch (kind) {
    case MaskKind::kIbm: return "IBM";
    case MaskKind::kIrm: return "IRM";
    case MaskKind::kIam: return "IAM";
    case MaskKind::kPsm: return "PSM";
  }
  return "?";
}

std::vector<TimeFreqMask> ComputeOracleMasks(const std::vector<ComplexSpectrogram>& sources,
                                             const ComplexSpectrogram& mixture, MaskKind kind,
                                             double clip) {
  if (sources.empty()) throw Error(Errc::kInvalidArgument, "no sources");
  if (mixture.NumChannels() != 1)
    throw Error(Errc::kShapeMismatch, "mixture must be single-channel");
  for (const auto& s : sources)
    if (!s.SameGrid(mixture) || s.NumChannels() != 1)
      throw Error(Errc::kShapeMismatch, "source and mixture grids differ");

  const std::size_t frames = mixture.NumFrames(), bins = mixture.NumBins();
  const std::size_t count = sources.size();
  std::vector<TimeFreqMask> masks(count, TimeFreqMask(frames, bins, kind, clip));
  std::vector<double> mag(count);

  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t f = 0; f < bins; ++f) {
      for (std::size_t i = 0; i < count; ++i) mag[i] = std::abs(sources[i].at(t, f, 0));
      const cdouble y = mixture.at(t, f, 0);
      switch (kind) {
        case MaskKind::kIbm: {
          std::size_t best = std::max_element(mag.begin(), mag.end()) - mag.begin();
          masks[best].at(t, f) = 1.0;
          break;
        }
        case MaskKind::kIrm: {
          double total = 0.0;
          for (double m : mag) total += m;
          for (std::size_t i = 0; i < count; ++i) masks[i].at(t, f) = mag[i] / (total + kMaskEps);
          break;
        }
        case MaskKind::kIam: {
          const double denom = std::abs(y) + kMaskEps;
          for (std::size_t i = 0; i < count; ++i)
            masks[i].at(t, f) = std::min(mag[i] / denom, clip);
          break;
        }
        case MaskKind::kPsm: {
          const double denom = std::abs(y) + kMaskEps;
          for (std::size_t i = 0; i < count; ++i) {
            const double phase = std::arg(y) - std::arg(sources[i].at(t, f, 0));
            masks[i].at(t, f) = std::clamp(mag[i] / denom * std::cos(phase), -clip, clip);
          }
          break;
        }
      }
    }
  }
  return masks;
}

ComplexSpectrogram ApplyMask(const ComplexSpectrogram& mixture, const TimeFreqMask& mask) {
  if (mask.frames != mixture.NumFrames() || mask.bins != mixture.NumBins())
    throw Error(Errc::kShapeMismatch, "mask does not match spectrogram grid");
  ComplexSpectrogram out = mixture;
  for (std::size_t t = 0; t < mask.frames; ++t)
    for (std::size_t f = 0; f < mask.bins; ++f)
      for (std::size_t c = 0; c < out.NumChannels(); ++c) out.at(t, f, c) *= mask.at(t, f);
  return out;
}

}  // namespace sepkit
