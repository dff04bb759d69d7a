// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_BEAMFORMER_H_
#define SEPKIT_BEAMFORMER_H_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "sepkit/masks.h"
#include "sepkit/stft.h"

namespace sepkit {

// Per-frequency C x C Hermitian covariance and the mask weight it was
// estimated with.
struct SpatialCovariance {
  std::vector<Eigen::MatrixXcd> matrices;
  std::vector<double> mask_mass;

  std::size_t NumBins() const { return matrices.size(); }
  std::size_t NumChannels() const { return matrices.empty() ? 0 : std::size_t(matrices[0].rows()); }
};

// Row f holds w(f); the output is w(f)^H y(t, f). WPD weights act on the
// stacked vector [y(t); y(t - D); ...; y(t - D - K + 1)].
struct BeamformerWeights {
  Eigen::MatrixXcd weights;
  std::size_t ref_channel = 0;
};

// Phi(f) = sum_t m y y^H / (sum_t m + eps), Hermitian symmetrized.
SpatialCovariance EstimateScm(const ComplexSpectrogram& spec, const TimeFreqMask& mask);

Eigen::VectorXcd SteeringVector(const SpatialCovariance& scm, std::size_t f);
std::vector<Eigen::VectorXcd> SteeringVectors(const SpatialCovariance& scm);

// Souden MVDR: w = (Phi_n^-1 Phi_s / tr(Phi_n^-1 Phi_s)) u_ref.
BeamformerWeights MvdrSouden(const SpatialCovariance& scm_s, const SpatialCovariance& scm_n,
                             std::size_t ref_channel);

// MPDR at one frequency: Phi^-1 d / (d^H Phi^-1 d) * conj(d_ref), so that
// w^H d = d_ref and a source arriving along d is passed as its reference
// channel image.
Eigen::VectorXcd MpdrVector(const Eigen::MatrixXcd& phi_y, const Eigen::VectorXcd& steering,
                            std::size_t ref_channel);
BeamformerWeights Mpdr(const SpatialCovariance& scm_y,
                       const std::vector<Eigen::VectorXcd>& steering, std::size_t ref_channel);

inline constexpr double kWpdPowerFloor = 1e-10;

struct WpdSolution {
  BeamformerWeights weights;              // F x C(K + 1)
  std::vector<Eigen::VectorXcd> steering; // per-frequency C-vector d
  std::size_t delay = 0;
  std::size_t taps = 0;
};

// Builds the convolutional beamformer: lambda(t, f) = max(mean_c m |y_c|^2,
// 1e-10), R(f) = sum_t y~ y~^H / lambda, w~ = R^-1 d~ / (d~^H R^-1 d~)
// scaled by conj(d_ref), with d~ = [d; 0].
WpdSolution WpdFilter(const ComplexSpectrogram& spec, const TimeFreqMask& source_mask,
                      std::size_t delay, std::size_t taps, std::size_t ref_channel);
ComplexSpectrogram ApplyWpd(const WpdSolution& solution, const ComplexSpectrogram& spec);
ComplexSpectrogram Wpd(const ComplexSpectrogram& spec, const TimeFreqMask& source_mask,
                       std::size_t delay, std::size_t taps, std::size_t ref_channel);

// Stacked observation [y(t); y(t - D); ...; y(t - D - K + 1)], zeros before
// the first frame.
Eigen::VectorXcd StackedObservation(const ComplexSpectrogram& spec, std::size_t t,
                                    std::size_t f, std::size_t delay, std::size_t taps);

ComplexSpectrogram ApplyBeamformer(const BeamformerWeights& weights,
                                   const ComplexSpectrogram& spec);

// Channel maximizing sum_f Phi_s(c, c) / Phi_n(c, c).
std::size_t SelectReferenceChannel(const SpatialCovariance& scm_s,
                                   const SpatialCovariance& scm_n);

}  // namespace sepkit

#endif  // SEPKIT_BEAMFORMER_H_
