// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sepkit/error.h"
#include "sepkit/metrics.h"
#include "sepkit/objectives.h"
#include "sepkit/stft.h"
#include "brute_force.h"
#include "test_util.h"

namespace sepkit {
namespace {

TimeFreqMask Filled(double v) { return TimeFreqMask(4, 5, MaskKind::kIrm, 10.0, v); }

TEST(MaskLossTest, Examples) {
  Rng rng(41);
  TimeFreqMask ref = Filled(0.0);
  for (double& v : ref.values) v = rng.Uniform(0.0, 0.8);
  EXPECT_EQ(MaskLoss(ref, ref, MaskLossKind::kMse), 0.0);
  TimeFreqMask est = ref;
  for (double& v : est.values) v += 0.1;
  EXPECT_NEAR(MaskLoss(est, ref, MaskLossKind::kMse), 0.01, 1e-12);
  EXPECT_NEAR(MaskLoss(Filled(0.5), Filled(1.0), MaskLossKind::kCrossEntropy), std::log(2.0), 1e-12);
  // Estimates are clamped away from 0 and 1.
  EXPECT_NEAR(MaskLoss(Filled(0.0), Filled(1.0), MaskLossKind::kCrossEntropy), -std::log(1e-7), 1e-9);
  EXPECT_THROW(MaskLoss(Filled(0.5), Filled(1.5), MaskLossKind::kCrossEntropy), Error);
  EXPECT_THROW(MaskLoss(Filled(0.5), TimeFreqMask(3, 5, MaskKind::kIrm), MaskLossKind::kMse), Error);
}

TEST(SignalApproxLossTest, Examples) {
  Rng rng(42);
  const auto ref = Analyze(testing::RandomWave(rng, 1, 1000), StftConfig{});
  EXPECT_EQ(SignalApproxLoss(ref, ref, SpectrumDomain::kMagnitude), 0.0);
  EXPECT_EQ(SignalApproxLoss(ref, ref, SpectrumDomain::kComplex), 0.0);
  ComplexSpectrogram flipped = ref;
  for (auto& v : flipped.values()) v = -v;
  double mean_power = 0.0;
  for (const auto& v : ref.values()) mean_power += std::norm(v) / double(ref.values().size());
  EXPECT_NEAR(SignalApproxLoss(flipped, ref, SpectrumDomain::kMagnitude), 0.0, 1e-12);
  EXPECT_NEAR(SignalApproxLoss(flipped, ref, SpectrumDomain::kComplex), 4.0 * mean_power, 1e-9 * mean_power);

  const auto est = Analyze(testing::RandomWave(rng, 1, 1000), StftConfig{});
  double mag = 0.0, cplx = 0.0;
  for (std::size_t t = 0; t < est.NumFrames(); ++t)
    for (std::size_t f = 0; f < est.NumBins(); ++f) {
      mag += std::pow(std::abs(est.at(t, f, 0)) - std::abs(ref.at(t, f, 0)), 2);
      cplx += std::norm(est.at(t, f, 0) - ref.at(t, f, 0));
    }
  const double count = double(est.NumFrames() * est.NumBins());
  EXPECT_NEAR(SignalApproxLoss(est, ref, SpectrumDomain::kMagnitude), mag / count, 1e-12 * mag);
  EXPECT_NEAR(SignalApproxLoss(est, ref, SpectrumDomain::kComplex), cplx / count, 1e-12 * cplx);
}

TEST(SiSnrLossTest, Examples) {
  const Waveform ref = Waveform::Mono(16000, {1, -1, 1, -1});
  EXPECT_EQ(SiSnrLoss(ref, ref), -kDbCap);
  EXPECT_EQ(SiSnrLoss(Waveform::Mono(16000, {3, -3, 3, -3}), ref), -kDbCap);
  EXPECT_NEAR(SiSnrLoss(Waveform::Mono(16000, {1, -1, 1, 1}), ref), 10.0 * std::log10(2.0), 1e-12);
  EXPECT_THROW(SiSnrLoss(ref, Waveform::Mono(16000, {2, 2, 2, 2})), Error);
}

TEST(PitTest, Examples) {
  Eigen::MatrixXd m(2, 2);
  m << 0.1, 0.9, 0.8, 0.2;
  auto r = PitResolve(m);
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{0, 1}));
  EXPECT_NEAR(r.value, 0.15, 1e-15);
  m << 0.5, 0.5, 0.5, 0.5;
  r = PitResolve(m);
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.value, 0.5);
  m << 0.9, -120.0, -120.0, 0.9;
  EXPECT_EQ(PitResolve(m).permutation, (std::vector<std::size_t>{1, 0}));

  Eigen::MatrixXd one(1, 1);
  one << 4.2;
  r = PitResolve(one);
  EXPECT_EQ(r.value, 4.2);
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{0}));

  EXPECT_THROW(PitResolve(Eigen::MatrixXd::Zero(9, 9)), Error);
  EXPECT_THROW(PitResolve(Eigen::MatrixXd::Zero(2, 3)), Error);
}

TEST(PitTest, MatchesBruteForce) {
  Rng rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 6;
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = std::round(rng.Uniform(0, 5));  // force ties
    const auto best = testing::PitBruteForce(m);
    const auto r = PitResolve(m);
    ASSERT_EQ(r.permutation, best.perm);
    ASSERT_NEAR(r.value, best.total / double(n), 1e-12);
    ASSERT_LE(r.value, m.diagonal().mean() + 1e-12);
  }
}

TEST(MixitTest, Examples) {
  Rng rng(44);
  const Waveform mix1 = testing::RandomWave(rng, 1, 800), mix2 = testing::RandomWave(rng, 1, 800);
  auto r = MixitLoss({mix2, mix1}, {mix1, mix2});
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(r.value, -kDbCap);
  r = MixitLoss({mix1, mix2}, {mix1, mix2});
  EXPECT_EQ(r.permutation, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.value, -kDbCap);
  EXPECT_THROW(MixitLoss({mix1}, {mix1, mix2}), Error);
  EXPECT_THROW(MixitLoss({mix1, mix2}, {mix1}), Error);
}

TEST(MixitTest, MatchesEnumerationAndIsOrderInvariant) {
  Rng rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 2 + trial % 3;  // 2..4
    std::vector<Waveform> ests;
    for (std::size_t i = 0; i < m; ++i) ests.push_back(testing::RandomWave(rng, 1, 500));
    const std::vector<Waveform> mixes = {testing::RandomWave(rng, 1, 500), testing::RandomWave(rng, 1, 500)};
    const double best = testing::MixitBruteForce(ests, mixes);
    const auto r = MixitLoss(ests, mixes);
    ASSERT_NEAR(r.value, best, 1e-9);
    std::vector<Waveform> reversed(ests.rbegin(), ests.rend());
    ASSERT_NEAR(MixitLoss(reversed, mixes).value, r.value, 1e-9);
  }
}

}  // namespace
}  // namespace sepkit
