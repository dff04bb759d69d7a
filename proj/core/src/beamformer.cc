// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sepkit/beamformer.h"

#include <algorithm>
#include <cmath>

#include "sepkit/error.h"
#include "sepkit/hermitian.h"

namespace sepkit {
namespace {

Eigen::VectorXcd Observation(const ComplexSpectrogram& spec, std::size_t t, std::size_t f) {
  const std::size_t channels = spec.NumChannels();
  Eigen::VectorXcd y(channels);
  for (std::size_t c = 0; c < channels; ++c) y(Eigen::Index(c)) = spec.at(t, f, c);
  return y;
}

void CheckMask(const ComplexSpectrogram& spec, const TimeFreqMask& mask) {
  if (mask.frames != spec.NumFrames() || mask.bins != spec.NumBins())
    throw Error(Errc::kShapeMismatch, "mask does not match spectrogram grid");
  if (spec.NumChannels() == 0) throw Error(Errc::kShapeMismatch, "no channels");
}

void CheckRef(std::size_t ref, std::size_t channels) {
  if (ref >= channels) throw Error(Errc::kOutOfRange, "reference channel out of range");
}

}  // namespace

SpatialCovariance EstimateScm(const ComplexSpectrogram& spec, const TimeFreqMask& mask) {
  CheckMask(spec, mask);
  const std::size_t channels = spec.NumChannels();
  SpatialCovariance scm;
  scm.matrices.assign(spec.NumBins(), Eigen::MatrixXcd::Zero(channels, channels));
  scm.mask_mass.assign(spec.NumBins(), 0.0);
  for (std::size_t f = 0; f < spec.NumBins(); ++f) {
    Eigen::MatrixXcd& phi = scm.matrices[f];
    double mass = 0.0;
    for (std::size_t t = 0; t < spec.NumFrames(); ++t) {
      const double m = mask.at(t, f);
      if (m == 0.0) continue;
      Eigen::VectorXcd y = Observation(spec, t, f);
      phi.noalias() += m * (y * y.adjoint());
      mass += m;
    }
    phi /= (mass + kMaskEps);
    phi = Hermitize(phi);
    scm.mask_mass[f] = mass;
  }
  return scm;
}

Eigen::VectorXcd SteeringVector(const SpatialCovariance& scm, std::size_t f) {
  if (f >= scm.NumBins()) throw Error(Errc::kOutOfRange, "frequency index");
  return PrincipalEigenvector(scm.matrices[f]);
}

std::vector<Eigen::VectorXcd> SteeringVectors(const SpatialCovariance& scm) {
  std::vector<Eigen::VectorXcd> out;
  out.reserve(scm.NumBins());
  for (std::size_t f = 0; f < scm.NumBins(); ++f) out.push_back(SteeringVector(scm, f));
  return out;
}

BeamformerWeights MvdrSouden(const SpatialCovariance& scm_s, const SpatialCovariance& scm_n,
                             std::size_t ref_channel) {
  if (scm_s.NumBins() != scm_n.NumBins() || scm_s.NumChannels() != scm_n.NumChannels())
    throw Error(Errc::kShapeMismatch, "speech and noise covariances differ in shape");
  const std::size_t channels = scm_s.NumChannels();
  CheckRef(ref_channel, channels);
  BeamformerWeights out;
  out.ref_channel = ref_channel;
  out.weights.resize(Eigen::Index(scm_s.NumBins()), Eigen::Index(channels));
  for (std::size_t f = 0; f < scm_s.NumBins(); ++f) {
    Eigen::MatrixXcd ratio = LoadedSolve(scm_n.matrices[f], scm_s.matrices[f]);
    const cdouble trace = ratio.trace();
    if (!std::isfinite(trace.real()) || !std::isfinite(trace.imag()) || std::abs(trace) == 0.0)
      throw Error(Errc::kNumerical, "MVDR trace is not finite at bin " + std::to_string(f));
    out.weights.row(Eigen::Index(f)) = (ratio.col(Eigen::Index(ref_channel)) / trace).transpose();
  }
  return out;
}

Eigen::VectorXcd MpdrVector(const Eigen::MatrixXcd& phi_y, const Eigen::VectorXcd& steering,
                            std::size_t ref_channel) {
  if (phi_y.rows() != steering.size())
    throw Error(Errc::kShapeMismatch, "steering vector and covariance differ in size");
  CheckRef(ref_channel, std::size_t(steering.size()));
  Eigen::VectorXcd numer = LoadedSolve(phi_y, steering);
  const cdouble denom = steering.dot(numer);  // d^H Phi^-1 d
  if (!(denom.real() > 0.0))
    throw Error(Errc::kNumerical, "d^H Phi^-1 d is not positive");
  return numer / denom * std::conj(steering(Eigen::Index(ref_channel)));
}

BeamformerWeights Mpdr(const SpatialCovariance& scm_y,
                       const std::vector<Eigen::VectorXcd>& steering, std::size_t ref_channel) {
  if (steering.size() != scm_y.NumBins())
    throw Error(Errc::kShapeMismatch, "one steering vector per frequency expected");
  BeamformerWeights out;
  out.ref_channel = ref_channel;
  out.weights.resize(Eigen::Index(scm_y.NumBins()), Eigen::Index(scm_y.NumChannels()));
  for (std::size_t f = 0; f < scm_y.NumBins(); ++f)
    out.weights.row(Eigen::Index(f)) = MpdrVector(scm_y.matrices[f], steering[f], ref_channel).transpose();
  return out;
}

Eigen::VectorXcd StackedObservation(const ComplexSpectrogram& spec, std::size_t t,
                                    std::size_t f, std::size_t delay, std::size_t taps) {
  const std::size_t channels = spec.NumChannels();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(Eigen::Index(channels * (taps + 1)));
  for (std::size_t c = 0; c < channels; ++c) out(Eigen::Index(c)) = spec.at(t, f, c);
  for (std::size_t k = 0; k < taps; ++k) {
    const std::size_t lag = delay + k;
    if (lag > t) break;
    for (std::size_t c = 0; c < channels; ++c)
      out(Eigen::Index((k + 1) * channels + c)) = spec.at(t - lag, f, c);
  }
  return out;
}

WpdSolution WpdFilter(const ComplexSpectrogram& spec, const TimeFreqMask& source_mask,
                      std::size_t delay, std::size_t taps, std::size_t ref_channel) {
  CheckMask(spec, source_mask);
  const std::size_t channels = spec.NumChannels();
  CheckRef(ref_channel, channels);
  if (spec.NumFrames() <= delay + taps)
    throw Error(Errc::kTooShort, "WPD needs more frames than delay + taps");

  const std::size_t frames = spec.NumFrames();
  const Eigen::Index dim = Eigen::Index(channels * (taps + 1));
  SpatialCovariance scm_s = EstimateScm(spec, source_mask);

  WpdSolution solution;
  solution.delay = delay;
  solution.taps = taps;
  solution.weights.ref_channel = ref_channel;
  solution.weights.weights.resize(Eigen::Index(spec.NumBins()), dim);
  solution.steering.reserve(spec.NumBins());

  for (std::size_t f = 0; f < spec.NumBins(); ++f) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t t = 0; t < frames; ++t) {
      double power = 0.0;
      for (std::size_t c = 0; c < channels; ++c) power += std::norm(spec.at(t, f, c));
      const double lambda = std::max(source_mask.at(t, f) * power / double(channels), kWpdPowerFloor);
      Eigen::VectorXcd y = StackedObservation(spec, t, f, delay, taps);
      r.noalias() += (y * y.adjoint()) / lambda;
    }
    r = Hermitize(r);
    Eigen::VectorXcd d = SteeringVector(scm_s, f);
    Eigen::VectorXcd d_stacked = Eigen::VectorXcd::Zero(dim);
    d_stacked.head(Eigen::Index(channels)) = d;
    solution.weights.weights.row(Eigen::Index(f)) = MpdrVector(r, d_stacked, ref_channel).transpose();
    solution.steering.push_back(std::move(d));
  }
  return solution;
}

ComplexSpectrogram ApplyWpd(const WpdSolution& solution, const ComplexSpectrogram& spec) {
  const auto& w = solution.weights.weights;
  if (std::size_t(w.rows()) != spec.NumBins() ||
      std::size_t(w.cols()) != spec.NumChannels() * (solution.taps + 1))
    throw Error(Errc::kShapeMismatch, "WPD weights do not match spectrogram");
  ComplexSpectrogram out = spec.EmptyLike(1);
  for (std::size_t f = 0; f < spec.NumBins(); ++f) {
    Eigen::VectorXcd wf = w.row(Eigen::Index(f)).transpose();
    for (std::size_t t = 0; t < spec.NumFrames(); ++t)
      out.at(t, f, 0) = wf.dot(StackedObservation(spec, t, f, solution.delay, solution.taps));
  }
  return out;
}

ComplexSpectrogram Wpd(const ComplexSpectrogram& spec, const TimeFreqMask& source_mask,
                       std::size_t delay, std::size_t taps, std::size_t ref_channel) {
  return ApplyWpd(WpdFilter(spec, source_mask, delay, taps, ref_channel), spec);
}

ComplexSpectrogram ApplyBeamformer(const BeamformerWeights& weights,
                                   const ComplexSpectrogram& spec) {
  const auto& w = weights.weights;
  if (std::size_t(w.rows()) != spec.NumBins() || std::size_t(w.cols()) != spec.NumChannels())
    throw Error(Errc::kShapeMismatch, "beamformer weights do not match spectrogram");
  ComplexSpectrogram out = spec.EmptyLike(1);
  const std::size_t channels = spec.NumChannels();
  for (std::size_t t = 0; t < spec.NumFrames(); ++t) {
    for (std::size_t f = 0; f < spec.NumBins(); ++f) {
      cdouble acc = 0.0;
      for (std::size_t c = 0; c < channels; ++c)
        acc += std::conj(w(Eigen::Index(f), Eigen::Index(c))) * spec.at(t, f, c);
      out.at(t, f, 0) = acc;
    }
  }
  return out;
}

std::size_t SelectReferenceChannel(const SpatialCovariance& scm_s,
                                   const SpatialCovariance& scm_n) {
  if (scm_s.NumBins() != scm_n.NumBins() || scm_s.NumChannels() != scm_n.NumChannels())
    throw Error(Errc::kShapeMismatch, "speech and noise covariances differ in shape");
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t c = 0; c < scm_s.NumChannels(); ++c) {
    double score = 0.0;
    for (std::size_t f = 0; f < scm_s.NumBins(); ++f) {
      const Eigen::Index i = Eigen::Index(c);
      score += scm_s.matrices[f](i, i).real() / (scm_n.matrices[f](i, i).real() + kMaskEps);
    }
    if (score > best_score) {
      best_score = score;
      best = c;
    }
  }
  return best;
}

}  // namespace sepkit
