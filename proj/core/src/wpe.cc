// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sepkit/wpe.h"

#include <algorithm>

#include "sepkit/error.h"
#include "sepkit/hermitian.h"

namespace sepkit {
namespace {

// Columns are frames: C x T.
Eigen::MatrixXcd FrameMatrix(const ComplexSpectrogram& spec, std::size_t f) {
  Eigen::MatrixXcd y(Eigen::Index(spec.NumChannels()), Eigen::Index(spec.NumFrames()));
  for (std::size_t t = 0; t < spec.NumFrames(); ++t)
    for (std::size_t c = 0; c < spec.NumChannels(); ++c)
      y(Eigen::Index(c), Eigen::Index(t)) = spec.at(t, f, c);
  return y;
}

// Delayed context, (C * K) x T, zero before the first frame.
Eigen::MatrixXcd ContextMatrix(const Eigen::MatrixXcd& y, std::size_t delay, std::size_t taps) {
  const Eigen::Index channels = y.rows(), frames = y.cols();
  Eigen::MatrixXcd ctx = Eigen::MatrixXcd::Zero(channels * Eigen::Index(taps), frames);
  for (std::size_t k = 0; k < taps; ++k) {
    const Eigen::Index lag = Eigen::Index(delay + k);
    if (lag >= frames) break;
    ctx.block(Eigen::Index(k) * channels, lag, channels, frames - lag) =
        y.leftCols(frames - lag);
  }
  return ctx;
}

Eigen::VectorXd InversePower(const Eigen::MatrixXcd& d, double eps) {
  Eigen::VectorXd inv(d.cols());
  for (Eigen::Index t = 0; t < d.cols(); ++t)
    inv(t) = 1.0 / std::max(d.col(t).squaredNorm() / double(d.rows()), eps);
  return inv;
}

// The weighted correlation spans as many decades as λ does, so a
// trace-relative load can dominate its small eigenvalues and the step stops
// being a least-squares solve. Load only when the plain factorization fails.
Eigen::MatrixXcd SolveNormalEquations(const Eigen::MatrixXcd& corr, const Eigen::MatrixXcd& cross) {
  Eigen::LLT<Eigen::MatrixXcd> llt(corr);
  if (llt.info() == Eigen::Success) {
    Eigen::MatrixXcd g = llt.solve(cross);
    if (g.allFinite()) return g;
  }
  return LoadedSolve(corr, cross);
}

double Objective(const Eigen::MatrixXcd& d, const Eigen::VectorXd& inv_power) {
  return (d.colwise().squaredNorm().transpose().array() * inv_power.array()).sum();
}

}  // namespace

void CheckWpeConfig(const WpeConfig& cfg) {
  if (cfg.delay < 1) throw Error(Errc::kInvalidConfig, "WPE delay must be >= 1");
  if (!(cfg.eps > 0.0)) throw Error(Errc::kInvalidConfig, "WPE eps must be positive");
}

WpeResult WpeDetailed(const ComplexSpectrogram& spec, const WpeConfig& cfg) {
  CheckWpeConfig(cfg);
  if (spec.NumFrames() <= cfg.delay + cfg.taps)
    throw Error(Errc::kTooShort, "WPE needs more frames than delay + taps");

  const std::size_t channels = spec.NumChannels();
  WpeResult result;
  result.output = spec;
  result.filters.assign(spec.NumBins(), Eigen::MatrixXcd::Zero(Eigen::Index(channels * cfg.taps),
                                                               Eigen::Index(channels)));
  if (cfg.taps == 0 || cfg.iterations == 0) return result;
  result.objectives.assign(cfg.iterations, std::vector<WpeObjective>(spec.NumBins()));

  for (std::size_t f = 0; f < spec.NumBins(); ++f) {
    const Eigen::MatrixXcd y = FrameMatrix(spec, f);
    const Eigen::MatrixXcd ctx = ContextMatrix(y, cfg.delay, cfg.taps);
    Eigen::MatrixXcd d = y;
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
      const Eigen::VectorXd inv_power = InversePower(d, cfg.eps);
      const Eigen::MatrixXcd weighted = ctx * inv_power.asDiagonal();
      const Eigen::MatrixXcd corr = Hermitize(weighted * ctx.adjoint());
      const Eigen::MatrixXcd cross = weighted * y.adjoint();
      const Eigen::MatrixXcd g = SolveNormalEquations(corr, cross);
      result.objectives[it][f].before = Objective(d, inv_power);
      d = y - g.adjoint() * ctx;
      result.objectives[it][f].after = Objective(d, inv_power);
      result.filters[f] = g;
    }
    for (std::size_t t = 0; t < spec.NumFrames(); ++t)
      for (std::size_t c = 0; c < channels; ++c)
        result.output.at(t, f, c) = d(Eigen::Index(c), Eigen::Index(t));
  }
  return result;
}

ComplexSpectrogram Wpe(const ComplexSpectrogram& spec, const WpeConfig& cfg) {
  return WpeDetailed(spec, cfg).output;
}

ComplexSpectrogram ApplyWpeFilters(const std::vector<Eigen::MatrixXcd>& filters,
                                   const ComplexSpectrogram& spec, const WpeConfig& cfg) {
  CheckWpeConfig(cfg);
  const std::size_t channels = spec.NumChannels();
  if (filters.size() != spec.NumBins())
    throw Error(Errc::kShapeMismatch, "one filter per frequency expected");
  ComplexSpectrogram out = spec;
  if (cfg.taps == 0) return out;
  for (std::size_t f = 0; f < spec.NumBins(); ++f) {
    const auto& g = filters[f];
    if (std::size_t(g.rows()) != channels * cfg.taps || std::size_t(g.cols()) != channels)
      throw Error(Errc::kShapeMismatch, "filter shape does not match taps and channels");
    const Eigen::MatrixXcd y = FrameMatrix(spec, f);
    const Eigen::MatrixXcd d = y - g.adjoint() * ContextMatrix(y, cfg.delay, cfg.taps);
    for (std::size_t t = 0; t < spec.NumFrames(); ++t)
      for (std::size_t c = 0; c < channels; ++c)
        out.at(t, f, c) = d(Eigen::Index(c), Eigen::Index(t));
  }
  return out;
}

}  // namespace sepkit
