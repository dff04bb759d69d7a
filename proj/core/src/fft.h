// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_SRC_FFT_H_
#define SEPKIT_SRC_FFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sepkit::internal {

using cdouble = std::complex<double>;

// One-sided forward transform of a real frame of length n (n/2 + 1 bins).
// Input shorter than n is zero padded.
std::vector<cdouble> Rfft(std::span<const double> frame, std::size_t n);

// Inverse of Rfft: n real samples from n/2 + 1 bins, scaled by 1/n.
std::vector<double> Irfft(std::span<const cdouble> bins, std::size_t n);

std::size_t NextPow2(std::size_t n);

// Full linear convolution, length a.size() + b.size() - 1.
std::vector<double> FftConvolve(std::span<const double> a, std::span<const double> b);

// c[k] = sum_n a[n + k] * b[n] for k in [0, max_lag). Out-of-range samples
// are zero.
std::vector<double> CrossCorrelate(std::span<const double> a, std::span<const double> b,
                                   std::size_t max_lag);

}  // namespace sepkit::internal

#endif  // SEPKIT_SRC_FFT_H_
