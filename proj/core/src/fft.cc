// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fft.h"

#include <algorithm>
#include <unsupported/Eigen/FFT>

namespace sepkit::internal {
namespace {

// Eigen::FFT caches twiddle tables per instance; one instance per thread.
Eigen::FFT<double>& Engine() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    return f;
  }();
  return fft;
}

}  // namespace

std::vector<cdouble> Rfft(std::span<const double> frame, std::size_t n) {
  std::vector<double> buf(n, 0.0);
  std::copy_n(frame.begin(), std::min(frame.size(), n), buf.begin());
  std::vector<cdouble> out;
  Engine().fwd(out, buf);
  out.resize(n / 2 + 1);
  return out;
}

std::vector<double> Irfft(std::span<const cdouble> bins, std::size_t n) {
  std::vector<cdouble> in(bins.begin(), bins.end());
  in.resize(n / 2 + 1);
  std::vector<double> out;
  Engine().inv(out, in, Eigen::Index(n));
  return out;
}

std::size_t NextPow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> FftConvolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t full = a.size() + b.size() - 1;
  const std::size_t n = NextPow2(full);
  auto fa = Rfft(a, n);
  auto fb = Rfft(b, n);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  auto out = Irfft(fa, n);
  out.resize(full);
  return out;
}

std::vector<double> CrossCorrelate(std::span<const double> a, std::span<const double> b,
                                   std::size_t max_lag) {
  std::vector<double> out(max_lag, 0.0);
  if (a.empty() || b.empty() || max_lag == 0) return out;
  const std::size_t n = NextPow2(a.size() + b.size() + max_lag);
  auto fa = Rfft(a, n);
  auto fb = Rfft(b, n);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= std::conj(fb[k]);
  auto r = Irfft(fa, n);
  for (std::size_t k = 0; k < max_lag; ++k) out[k] = r[k];
  return out;
}

}  // namespace sepkit::internal
