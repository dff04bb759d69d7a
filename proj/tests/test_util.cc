// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "test_util.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sepkit::testing {

std::vector<double> RandomSignal(Rng& rng, std::size_t n, double scale) {
  std::vector<double> x(n);
  for (double& v : x) v = scale * rng.Normal();
  return x;
}

Waveform RandomWave(Rng& rng, std::size_t channels, std::size_t n, int rate) {
  Waveform w(rate, channels, n);
  for (auto& ch : w.data) ch = RandomSignal(rng, n);
  return w;
}

std::filesystem::path ScratchDir(const std::string& name) {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  std::string tag = name;
  if (info) tag = std::string(info->test_suite_name()) + "." + info->name() + "." + name;
  const auto dir = std::filesystem::path(::testing::TempDir()) / ("sepkit_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::complex<double>> NaiveDft(std::span<const double> x, std::size_t n_fft) {
  std::vector<std::complex<double>> out(n_fft / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t n = 0; n < x.size() && n < n_fft; ++n)
      acc += x[n] * std::polar(1.0, -2.0 * std::numbers::pi * double(k * n % n_fft) / double(n_fft));
    out[k] = acc;
  }
  return out;
}

std::vector<double> NaiveConvolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) acc += a[i] * b[i];
  return acc;
}

double MaxAbsDiff(std::span<const double> a, std::span<const double> b) {
  double m = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace sepkit::testing
