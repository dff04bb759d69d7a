// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <benchmark/benchmark.h>

#include "sepkit/beamformer.h"
#include "sepkit/bss_eval.h"
#include "sepkit/masks.h"
#include "sepkit/simulate.h"
#include "sepkit/stft.h"
#include "sepkit/stoi.h"
#include "sepkit/wpe.h"

namespace sepkit {
namespace {

Waveform Noise(std::size_t seconds, std::size_t channels, uint64_t seed) {
  return GenNoise(seconds * 16000, channels, seed);
}

void BM_StftRoundTrip(benchmark::State& state) {
  const Waveform w = Noise(4, 1, 1);
  StftConfig cfg;
  cfg.n_fft = std::size_t(state.range(0));
  cfg.hop = cfg.n_fft / 4;
  for (auto _ : state) benchmark::DoNotOptimize(Synthesize(Analyze(w, cfg)));
  state.SetItemsProcessed(state.iterations() * int64_t(w.NumSamples()));
}
BENCHMARK(BM_StftRoundTrip)->Arg(256)->Arg(512)->Arg(1024);

void BM_Wpe(benchmark::State& state) {
  const auto spec = Analyze(Noise(4, std::size_t(state.range(0)), 2), StftConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(Wpe(spec, WpeConfig{}));
}
BENCHMARK(BM_Wpe)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Mvdr(benchmark::State& state) {
  const auto spec = Analyze(Noise(4, 4, 3), StftConfig{});
  TimeFreqMask speech(spec.NumFrames(), spec.NumBins(), MaskKind::kIrm, 10.0, 0.7);
  TimeFreqMask noise(spec.NumFrames(), spec.NumBins(), MaskKind::kIrm, 10.0, 0.3);
  for (auto _ : state) {
    const auto w = MvdrSouden(EstimateScm(spec, speech), EstimateScm(spec, noise), 0);
    benchmark::DoNotOptimize(ApplyBeamformer(w, spec));
  }
}
BENCHMARK(BM_Mvdr)->Unit(benchmark::kMillisecond);

void BM_BssEval(benchmark::State& state) {
  const std::vector<Waveform> refs = {Noise(4, 1, 4), Noise(4, 1, 5)};
  std::vector<Waveform> ests = refs;
  for (std::size_t k = 0; k < ests[0].NumSamples(); ++k) ests[0].data[0][k] += 0.3 * refs[1].data[0][k];
  for (auto _ : state) benchmark::DoNotOptimize(BssEval(ests, refs, std::size_t(state.range(0))));
}
BENCHMARK(BM_BssEval)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Stoi(benchmark::State& state) {
  const Waveform ref = SynthSpeech(3 * 16000, 6), noise = Noise(3, 1, 7);
  const Waveform est = MixAtSnr(ref, noise, 0.0).mixture;
  for (auto _ : state) benchmark::DoNotOptimize(Stoi(est, ref));
}
BENCHMARK(BM_Stoi)->Unit(benchmark::kMillisecond);

void BM_Rir(benchmark::State& state) {
  RirSpec spec;
  spec.t60 = double(state.range(0)) / 10.0;
  spec.mics = {{3.0, 2.5, 1.5}, {3.08, 2.5, 1.5}};
  for (auto _ : state) benchmark::DoNotOptimize(GenerateRir(spec));
}
BENCHMARK(BM_Rir)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace sepkit

BENCHMARK_MAIN();
