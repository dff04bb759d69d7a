// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_WPE_H_
#define SEPKIT_WPE_H_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "sepkit/stft.h"

namespace sepkit {

struct WpeConfig {
  std::size_t taps = 10;
  std::size_t delay = 3;
  std::size_t iterations = 3;
  double eps = 1e-10;
};

void CheckWpeConfig(const WpeConfig& cfg);

// Weighted prediction objective sum_t |d(t)|^2 / lambda(t) at one frequency,
// with lambda taken from the previous iterate. `before` evaluates the
// previous iterate, `after` the new one.
struct WpeObjective {
  double before = 0.0;
  double after = 0.0;
};

struct WpeResult {
  ComplexSpectrogram output;
  // filters[f] is the (C * K) x C prediction matrix of the last iteration.
  std::vector<Eigen::MatrixXcd> filters;
  // objectives[i][f] for iteration i.
  std::vector<std::vector<WpeObjective>> objectives;
};

// Batch multichannel WPE: per frequency, alternate
//   lambda(t) = max(mean_c |d_c(t)|^2, eps)
//   G = (sum ybar ybar^H / lambda)^-1 (sum ybar y^H / lambda)
//   d(t) = y(t) - G^H ybar(t)
// where ybar(t) stacks y(t - D) ... y(t - D - K + 1) over all channels.
WpeResult WpeDetailed(const ComplexSpectrogram& spec, const WpeConfig& cfg);
ComplexSpectrogram Wpe(const ComplexSpectrogram& spec, const WpeConfig& cfg);

// Applies fixed prediction filters: d(t) = y(t) - G^H ybar(t). Linear in
// the input, so early and late parts of a signal can be pushed through
// separately.
ComplexSpectrogram ApplyWpeFilters(const std::vector<Eigen::MatrixXcd>& filters,
                                   const ComplexSpectrogram& spec, const WpeConfig& cfg);

}  // namespace sepkit

#endif  // SEPKIT_WPE_H_
