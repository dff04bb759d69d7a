// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sepkit/objectives.h"

#include <algorithm>
#include <cmath>

#include "sepkit/error.h"
#include "sepkit/metrics.h"
#include "sepkit/permutation.h"

namespace sepkit {

double MaskLoss(const TimeFreqMask& est, const TimeFreqMask& ref, MaskLossKind kind) {
  if (est.frames != ref.frames || est.bins != ref.bins || est.values.size() != ref.values.size())
    throw Error(Errc::kShapeMismatch, "mask shapes differ");
  if (est.values.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < est.values.size(); ++i) {
    const double r = ref.values[i];
    if (kind == MaskLossKind::kMse) {
      const double diff = est.values[i] - r;
      total += diff * diff;
    } else {
      if (r < 0.0 || r > 1.0)
        throw Error(Errc::kInvalidArgument, "cross entropy target outside [0, 1]");
      const double e = std::clamp(est.values[i], 1e-7, 1.0 - 1e-7);
      total -= r * std::log(e) + (1.0 - r) * std::log(1.0 - e);
    }
  }
  return total / double(est.values.size());
}

double SignalApproxLoss(const ComplexSpectrogram& est, const ComplexSpectrogram& ref,
                        SpectrumDomain domain) {
  if (!est.SameGrid(ref) || est.NumChannels() != ref.NumChannels())
    throw Error(Errc::kShapeMismatch, "spectrogram shapes differ");
  const auto& a = est.values();
  const auto& b = ref.values();
  if (a.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (domain == SpectrumDomain::kMagnitude) {
      const double diff = std::abs(a[i]) - std::abs(b[i]);
      total += diff * diff;
    } else {
      total += std::norm(a[i] - b[i]);
    }
  }
  return total / double(a.size());
}

double SiSnrLoss(const Waveform& est, const Waveform& ref) { return -SiSnr(est, ref); }

LossValue PitResolve(const Eigen::MatrixXd& loss_matrix) {
  const auto n = std::size_t(loss_matrix.rows());
  if (n == 0 || loss_matrix.cols() != loss_matrix.rows())
    throw Error(Errc::kShapeMismatch, "PIT needs a non-empty square loss matrix");
  if (n > kMaxPitSources) throw Error(Errc::kOutOfRange, "PIT supports at most 8 sources");
  if (!loss_matrix.allFinite()) throw Error(Errc::kInvalidArgument, "non-finite loss entry");

  LossValue out;
  out.per_pair = loss_matrix;
  out.permutation = MinimizingPermutation(n, [&](std::size_t i, std::size_t j) {
    return loss_matrix(Eigen::Index(i), Eigen::Index(j));
  });
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    total += loss_matrix(Eigen::Index(i), Eigen::Index(out.permutation[i]));
  out.value = total / double(n);
  return out;
}

LossValue MixitLoss(const std::vector<Waveform>& ests, const std::vector<Waveform>& mixtures) {
  const std::size_t count = ests.size();
  if (count < 2 || count > kMaxMixitSources)
    throw Error(Errc::kOutOfRange, "MixIT needs between 2 and 8 estimates");
  if (mixtures.size() != 2) throw Error(Errc::kInvalidArgument, "MixIT needs exactly 2 mixtures");
  const std::size_t len = mixtures[0].NumSamples();
  for (const auto* group : {&ests, &mixtures})
    for (const auto& w : *group)
      if (w.NumChannels() != 1 || w.NumSamples() != len)
        throw Error(Errc::kShapeMismatch, "MixIT inputs must be mono and equal length");

  LossValue out;
  bool first = true;
  std::vector<double> remix0(len), remix1(len);
  // Bit i of `code` set means estimate i goes to mixture 1. Increasing code
  // order is lexicographic over the assignment list read from the last
  // estimate, so ties keep the earliest code.
  for (std::size_t code = 0; code < (std::size_t{1} << count); ++code) {
    std::fill(remix0.begin(), remix0.end(), 0.0);
    std::fill(remix1.begin(), remix1.end(), 0.0);
    for (std::size_t i = 0; i < count; ++i) {
      auto& target = (code >> i) & 1 ? remix1 : remix0;
      const auto& src = ests[i].data[0];
      for (std::size_t n = 0; n < len; ++n) target[n] += src[n];
    }
    const double value =
        0.5 * (-SiSnr(remix0, mixtures[0].data[0]) - SiSnr(remix1, mixtures[1].data[0]));
    if (first || value < out.value) {
      first = false;
      out.value = value;
      out.permutation.assign(count, 0);
      for (std::size_t i = 0; i < count; ++i) out.permutation[i] = (code >> i) & 1;
    }
  }
  return out;
}

}  // namespace sepkit
