// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <gtest/gtest.h>

#include <Eigen/QR>
#include <cmath>

#include "sepkit/error.h"
#include "sepkit/stft.h"
#include "sepkit/wpe.h"
#include "test_util.h"

namespace sepkit {
namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

ComplexSpectrogram NoiseSpec(uint64_t seed, std::size_t channels, std::size_t samples) {
  Rng rng(seed);
  return Analyze(testing::RandomWave(rng, channels, samples), StftConfig{});
}

double Power(const ComplexSpectrogram& s) {
  double acc = 0.0;
  for (const auto& v : s.values()) acc += std::norm(v);
  return acc;
}

TEST(WpeTest, IdentityCases) {
  const auto spec = NoiseSpec(31, 2, 8000);
  WpeConfig cfg;
  cfg.iterations = 0;
  EXPECT_EQ(Wpe(spec, cfg).values(), spec.values());
  cfg.iterations = 3;
  cfg.taps = 0;
  EXPECT_EQ(Wpe(spec, cfg).values(), spec.values());
}

TEST(WpeTest, Errors) {
  const auto spec = NoiseSpec(32, 1, 1000);  // 8 frames
  WpeConfig cfg;
  EXPECT_THROW(Wpe(spec, cfg), Error);
  cfg.taps = 2;
  cfg.delay = 0;
  EXPECT_THROW(Wpe(spec, cfg), Error);
}

TEST(WpeTest, WhiteNoiseIsUnpredictable) {
  WpeConfig cfg;  // K=10, D=3, 3 iterations
  double mean_db = 0.0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const auto spec = NoiseSpec(100 + seed, 2, 32000);
    const double ratio_db = 10.0 * std::log10(Power(Wpe(spec, cfg)) / Power(spec));
    EXPECT_LT(std::abs(ratio_db), 0.5) << "seed " << seed;
    mean_db += ratio_db / 10.0;
  }
  EXPECT_LT(std::abs(mean_db), 0.5);
}

// One iteration against an explicit weighted least-squares problem solved by QR.
TEST(WpeTest, FirstIterationMatchesLeastSquares) {
  const auto spec = NoiseSpec(33, 2, 6000);
  WpeConfig cfg;
  cfg.taps = 4;
  cfg.delay = 2;
  cfg.iterations = 1;
  const auto result = WpeDetailed(spec, cfg);
  const Eigen::Index channels = 2, dim = 8, frames = Eigen::Index(spec.NumFrames());
  for (std::size_t f : {1u, 40u, 200u}) {
    MatrixXcd a = MatrixXcd::Zero(frames, dim), b = MatrixXcd::Zero(frames, channels);
    for (Eigen::Index t = 0; t < frames; ++t) {
      double power = 0.0;
      for (std::size_t c = 0; c < 2; ++c) power += std::norm(spec.at(std::size_t(t), f, c));
      const double w = 1.0 / std::sqrt(std::max(power / 2.0, cfg.eps));
      for (std::size_t k = 0; k < cfg.taps; ++k) {
        const long src = long(t) - long(cfg.delay + k);
        if (src < 0) continue;
        for (std::size_t c = 0; c < 2; ++c)
          a(t, Eigen::Index(k * 2 + c)) = w * std::conj(spec.at(std::size_t(src), f, c));
      }
      for (std::size_t c = 0; c < 2; ++c) b(t, Eigen::Index(c)) = w * std::conj(spec.at(std::size_t(t), f, c));
    }
    const MatrixXcd g = a.colPivHouseholderQr().solve(b);
    ASSERT_LT((g - result.filters[f]).norm(), 1e-8 * g.norm()) << "bin " << f;
  }
  // The stored filters reproduce the output.
  const auto again = ApplyWpeFilters(result.filters, spec, cfg);
  for (std::size_t i = 0; i < again.values().size(); ++i)
    ASSERT_LT(std::abs(again.values()[i] - result.output.values()[i]), 1e-12);
}

TEST(WpeTest, ObjectiveNonIncreasing) {
  // Reverberant-like input: noise through a decaying per-bin AR filter.
  Rng rng(34);
  Waveform w = testing::RandomWave(rng, 2, 24000);
  for (auto& ch : w.data)
    for (std::size_t n = 2000; n < ch.size(); ++n) ch[n] += 0.6 * ch[n - 1000] + 0.3 * ch[n - 2000];
  const auto spec = Analyze(w, StftConfig{});
  const auto result = WpeDetailed(spec, WpeConfig{});
  ASSERT_EQ(result.objectives.size(), 3u);
  for (const auto& iteration : result.objectives)
    for (const auto& obj : iteration) ASSERT_LE(obj.after, obj.before * (1.0 + 1e-9));
  EXPECT_EQ(result.output.original_length(), spec.original_length());
  EXPECT_EQ(result.output.NumChannels(), 2u);
}

}  // namespace
}  // namespace sepkit
