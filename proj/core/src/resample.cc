// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sepkit/resample.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sepkit/error.h"

namespace sepkit {
namespace {

constexpr double kHalfWidth = double(kResamplerTapsPerPhase) / 2.0;

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  if (x == std::round(x)) return 0.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double Kaiser(double x) {
  const double r = x / kHalfWidth;
  if (std::abs(r) >= 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, kResamplerKaiserBeta * std::sqrt(1.0 - r * r)) /
         std::cyl_bessel_i(0.0, kResamplerKaiserBeta);
}

}  // namespace

PolyphaseResampler::PolyphaseResampler(std::size_t up, std::size_t down) {
  if (up == 0 || down == 0) throw Error(Errc::kInvalidArgument, "resampling factors must be positive");
  const std::size_t g = std::gcd(up, down);
  up_ = up / g;
  down_ = down / g;
  const double cutoff = std::min(1.0, double(up_) / double(down_));
  constexpr std::size_t taps = kResamplerTapsPerPhase;
  table_.resize(up_ * taps);
  for (std::size_t p = 0; p < up_; ++p) {
    for (std::size_t j = 0; j < taps; ++j) {
      const double x = double(taps / 2 - 1) - double(j) + double(p) / double(up_);
      table_[p * taps + j] = cutoff * Sinc(cutoff * x) * Kaiser(x);
    }
  }
}

std::size_t PolyphaseResampler::OutputLength(std::size_t n) const {
  return (n * up_ + down_ - 1) / down_;
}

std::vector<double> PolyphaseResampler::Process(std::span<const double> input) const {
  constexpr std::size_t taps = kResamplerTapsPerPhase;
  constexpr long offset = long(taps / 2) - 1;
  std::vector<double> out(OutputLength(input.size()));
  if (up_ == 1 && down_ == 1) {
    std::copy(input.begin(), input.end(), out.begin());
    return out;
  }
  const long n = long(input.size());
  for (std::size_t m = 0; m < out.size(); ++m) {
    const std::size_t pos = m * down_;
    const long base = long(pos / up_) - offset;
    const double* h = table_.data() + (pos % up_) * taps;
    double acc = 0.0;
    const long lo = std::max(0L, -base);
    const long hi = std::min(long(taps), n - base);
    for (long j = lo; j < hi; ++j) acc += h[j] * input[std::size_t(base + j)];
    out[m] = acc;
  }
  return out;
}

std::pair<std::size_t, std::size_t> RationalApproximation(double ratio, std::size_t max_term) {
  if (!(ratio > 0.0) || !std::isfinite(ratio))
    throw Error(Errc::kInvalidArgument, "ratio must be positive and finite");
  // Convergents h/k of the continued fraction of `ratio`.
  std::size_t h_prev = 1, h = std::size_t(std::floor(ratio));
  std::size_t k_prev = 0, k = 1;
  double frac = ratio - std::floor(ratio);
  std::pair<std::size_t, std::size_t> best = {std::max<std::size_t>(h, 1), 1};
  for (int iter = 0; iter < 64 && frac > 1e-12; ++iter) {
    const double inv = 1.0 / frac;
    const std::size_t a = std::size_t(std::floor(inv));
    frac = inv - double(a);
    const std::size_t h_next = a * h + h_prev;
    const std::size_t k_next = a * k + k_prev;
    if (h_next > max_term || k_next > max_term) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    best = {h, k};
  }
  if (best.first == 0) best.first = 1;
  return best;
}

std::vector<double> Resample(std::span<const double> input, int from_rate, int to_rate) {
  if (from_rate <= 0 || to_rate <= 0) throw Error(Errc::kInvalidArgument, "sample rates must be positive");
  return PolyphaseResampler(std::size_t(to_rate), std::size_t(from_rate)).Process(input);
}

}  // namespace sepkit
