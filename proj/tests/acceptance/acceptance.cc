// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <string>
#include <vector>

#include "brute_force.h"
#include "bss_eval_oracle.h"
#include "config.h"
#include "decay_oracle.h"
#include "pipeline.h"
#include "sepkit/beamformer.h"
#include "sepkit/bss_eval.h"
#include "sepkit/error.h"
#include "sepkit/masks.h"
#include "sepkit/metrics.h"
#include "sepkit/objectives.h"
#include "sepkit/simulate.h"
#include "sepkit/stft.h"
#include "sepkit/stoi.h"
#include "sepkit/wpe.h"

namespace sepkit {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

constexpr int kFs = 16000;

std::vector<double> Gaussian(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> x(n);
  for (double& v : x) v = scale * rng.Normal();
  return x;
}

double Energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

Waveform Image(const Waveform& dry, const std::vector<Waveform>& rirs) {
  Waveform out(dry.sample_rate, rirs.size(), dry.NumSamples());
  for (std::size_t m = 0; m < rirs.size(); ++m) out.data[m] = Convolve(dry, rirs[m]).data[0];
  return out;
}

Point3 Inside(Rng& rng, const Point3& room, double margin) {
  return {rng.Uniform(margin, room[0] - margin), rng.Uniform(margin, room[1] - margin),
          rng.Uniform(margin, room[2] - margin)};
}

// Point 1-2 m from `center` in the horizontal plane, at least 0.4 m from walls.
Point3 Around(Rng& rng, const Point3& center, const Point3& room) {
  for (;;) {
    const double r = rng.Uniform(1.0, 2.0), phi = rng.Uniform(0.0, 2.0 * std::numbers::pi);
    const Point3 p = {center[0] + r * std::cos(phi), center[1] + r * std::sin(phi),
                      center[2] + rng.Uniform(-0.2, 0.2)};
    if (p[0] > 0.4 && p[0] < room[0] - 0.4 && p[1] > 0.4 && p[1] < room[1] - 0.4) return p;
  }
}

// Two-mic array, 8 cm spacing, somewhere in the middle of a 6 x 5 x 3 room.
RirSpec TwoMicRoom(Rng& rng, double t60) {
  RirSpec spec;
  spec.room = {6.0, 5.0, 3.0};
  spec.t60 = t60;
  const Point3 c = {rng.Uniform(2.0, 4.0), rng.Uniform(1.8, 3.2), 1.5};
  spec.mics = {{c[0] - 0.04, c[1], c[2]}, {c[0] + 0.04, c[1], c[2]}};
  return spec;
}

Point3 ArrayCenter(const RirSpec& spec) {
  return {0.5 * (spec.mics[0][0] + spec.mics[1][0]), spec.mics[0][1], spec.mics[0][2]};
}

// 1. STFT perfect reconstruction.
Outcome CheckStftReconstruction() {
  const std::vector<StftConfig> configs = {{512, 128, WindowType::kHann, true},
                                           {256, 128, WindowType::kSqrtHann, true},
                                           {1024, 256, WindowType::kHann, true},
                                           {64, 16, WindowType::kSqrtHann, true}};
  Rng rng(101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto n = std::size_t(rng.Uniform(3000, 20000));
    const Waveform w = Waveform::Mono(kFs, Gaussian(rng, n));
    double peak = 0.0;
    for (double v : w.data[0]) peak = std::max(peak, std::abs(v));
    for (const auto& cfg : configs) {
      const Waveform back = Synthesize(Analyze(w, cfg));
      if (back.NumSamples() != n) return {false, "length changed"};
      for (std::size_t k = 0; k < n; ++k)
        worst = std::max(worst, std::abs(back.data[0][k] - w.data[0][k]) / peak);
    }
  }
  return {worst < 1e-6, Fmt("max |error|/peak = %.3g over 400 round trips (limit 1e-6)", worst)};
}

// 2. Oracle IRM/IBM separation of anechoic two-talker mixtures.
Outcome CheckOracleSeparation() {
  Rng rng(202);
  const std::size_t n = 4 * kFs;
  double irm = 0.0, ibm = 0.0;
  const StftConfig stft;
  for (int u = 0; u < 20; ++u) {
    RirSpec spec;
    spec.t60 = 0.0;
    spec.mics = {Inside(rng, spec.room, 0.5)};
    std::vector<Waveform> refs;
    for (int s = 0; s < 2; ++s) {
      spec.source = Inside(rng, spec.room, 0.5);
      Waveform img = Image(SynthSpeech(n, rng.Next()), GenerateRir(spec));
      const double gain = 1.0 / std::sqrt(Energy(img.data[0]) / double(n));
      for (double& v : img.data[0]) v *= gain;  // equal power: 0 dB
      refs.push_back(std::move(img));
    }
    Waveform mix(kFs, 1, n);
    for (std::size_t k = 0; k < n; ++k) mix.data[0][k] = refs[0].data[0][k] + refs[1].data[0][k];
    const auto y = Analyze(mix, stft);
    const std::vector<ComplexSpectrogram> specs = {Analyze(refs[0], stft), Analyze(refs[1], stft)};
    for (MaskKind kind : {MaskKind::kIrm, MaskKind::kIbm}) {
      const auto masks = ComputeOracleMasks(specs, y, kind);
      const std::vector<Waveform> ests = {Synthesize(ApplyMask(y, masks[0])), Synthesize(ApplyMask(y, masks[1]))};
      const auto r = BssEval(ests, refs, 512);
      const double mean = 0.5 * (r.sdr[0] + r.sdr[1]) / 20.0;
      (kind == MaskKind::kIrm ? irm : ibm) += mean;
    }
  }
  return {irm >= 10.0 && ibm >= 10.0,
          Fmt("mean SDR IRM %.2f dB, IBM %.2f dB over 20 mixtures (need >= 10)", irm, ibm)};
}

// 3. Mask-driven MVDR on reverberant, noisy two-channel recordings, plus the
// distortionless constraint of MPDR and WPD.
Outcome CheckMvdr() {
  Rng rng(303);
  const std::size_t n = 4 * kFs;
  pipeline::EnhanceConfig cfg;
  cfg.chain = {pipeline::ParseChainStep("mask:IRM"), pipeline::ParseChainStep("mvdr")};
  const StftConfig stft;
  double gain = 0.0, worst_constraint = 0.0;
  for (int u = 0; u < 20; ++u) {
    // One talker and one directional noise source at 0 dB, T60 = 0.2 s.
    RirSpec spec = TwoMicRoom(rng, 0.2);
    const Point3 center = ArrayCenter(spec);
    spec.source = Around(rng, center, spec.room);
    const Waveform speech = Image(SynthSpeech(n, rng.Next()), GenerateRir(spec));
    spec.source = Around(rng, center, spec.room);
    const Waveform noise = Image(GenNoise(n, 1, rng.Next()), GenerateRir(spec));
    const MixResult mix = MixAtSnr(speech, noise, 0.0);
    const Waveform ref = speech.Select(0), noise_ref = mix.scaled_noise.Select(0);

    const auto out = pipeline::EnhanceUtterance(cfg, stft, mix.mixture, {ref}, &noise_ref);
    gain += (SiSnr(out[0], ref) - SiSnr(mix.mixture.Select(0), ref)) / 20.0;

    // w^H d against conj(d_ref) for the reference channel 0.
    const auto y = Analyze(mix.mixture, stft);
    const auto masks = ComputeOracleMasks({Analyze(ref, stft), Analyze(noise_ref, stft)}, y.SelectChannel(0),
                                          MaskKind::kIrm);
    const auto steering = SteeringVectors(EstimateScm(y, masks[0]));
    TimeFreqMask ones(y.NumFrames(), y.NumBins(), MaskKind::kIrm, 10.0, 1.0);
    const auto mpdr = Mpdr(EstimateScm(y, ones), steering, 0);
    const auto wpd = WpdFilter(y, masks[0], 3, 5, 0);
    for (std::size_t f = 0; f < y.NumBins(); ++f) {
      const Eigen::VectorXcd w = mpdr.weights.row(Eigen::Index(f)).transpose();
      worst_constraint = std::max(worst_constraint, std::abs(w.dot(steering[f]) - std::conj(steering[f](0))));
      const Eigen::VectorXcd wt = wpd.weights.weights.row(Eigen::Index(f)).transpose();
      Eigen::VectorXcd dt = Eigen::VectorXcd::Zero(wt.size());
      dt.head(2) = wpd.steering[f];
      worst_constraint = std::max(worst_constraint, std::abs(wt.dot(dt) - std::conj(wpd.steering[f](0))));
    }
  }
  return {gain >= 8.0 && worst_constraint < 1e-8,
          Fmt("MVDR SI-SNR gain %.2f dB mean over 20 (need >= 8); MPDR/WPD max |w^H d - conj(d_ref)| = %.2g "
              "(need < 1e-8)",
              gain, worst_constraint)};
}

// 4. WPE on T60 = 0.5 s reverberation. Filters are estimated on the
// reverberant speech, then applied to the room responses themselves: the
// result is the effective response of room plus dereverberation, and its
// energy before/after 50 ms past the direct path gives the ratio.
double DirectSamples(const RirSpec& spec, std::size_t m) {
  const double dx = spec.source[0] - spec.mics[m][0], dy = spec.source[1] - spec.mics[m][1],
               dz = spec.source[2] - spec.mics[m][2];
  return std::sqrt(dx * dx + dy * dy + dz * dz) / spec.sound_speed * spec.fs;
}

double DirectToLate(std::span<const double> h, std::size_t split) {
  double early = 0.0, late = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) (k < split ? early : late) += h[k] * h[k];
  return 10.0 * std::log10(early / late);
}

Outcome CheckWpe() {
  Rng rng(404);
  const std::size_t n = 4 * kFs, pad = 1024;
  const StftConfig stft;
  const WpeConfig cfg;
  std::size_t improved = 0, bad_bins = 0;
  double min_gain = INFINITY, mean_gain = 0.0;
  for (int u = 0; u < 10; ++u) {
    RirSpec spec = TwoMicRoom(rng, 0.5);
    spec.source = Around(rng, ArrayCenter(spec), spec.room);
    const auto rirs = GenerateRir(spec);
    const Waveform y = Image(SynthSpeech(n, rng.Next()), rirs);
    const auto result = WpeDetailed(Analyze(y, stft), cfg);
    for (const auto& iteration : result.objectives)
      for (const auto& obj : iteration) bad_bins += obj.after > obj.before * (1.0 + 1e-9);

    Waveform h(kFs, rirs.size(), rirs[0].NumSamples() + 2 * pad);
    for (std::size_t m = 0; m < rirs.size(); ++m)
      std::copy(rirs[m].data[0].begin(), rirs[m].data[0].end(), h.data[m].begin() + long(pad));
    const Waveform effective = Synthesize(ApplyWpeFilters(result.filters, Analyze(h, stft), cfg));
    const auto split = pad + std::size_t(DirectSamples(spec, 0) + 0.05 * spec.fs);
    const double gain = DirectToLate(effective.data[0], split) - DirectToLate(h.data[0], split);
    improved += gain > 0.0;
    min_gain = std::min(min_gain, gain);
    mean_gain += gain / 10.0;
  }
  return {improved == 10 && bad_bins == 0,
          Fmt("direct-to-late ratio up on %zu/10 (mean %+.2f dB, smallest %+.2f dB); objective increases on %zu "
              "bin-iterations",
              improved, mean_gain, min_gain, bad_bins)};
}

// 5. Speed perturbation.
Outcome CheckSpeed() {
  const std::size_t n = 2 * kFs;
  double worst_len = 0.0, worst_freq = 0.0;
  for (double tone : {440.0, 1000.0}) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = std::sin(2.0 * std::numbers::pi * tone * double(k) / kFs);
    for (double factor : {0.9, 1.0, 1.1}) {
      const Waveform out = SpeedPerturb(Waveform::Mono(kFs, x), factor);
      worst_len = std::max(worst_len, std::abs(double(out.NumSamples()) - double(n) / factor));
      const double f = testing::ToneFrequency(out.data[0], kFs);
      worst_freq = std::max(worst_freq, std::abs(f / (tone * factor) - 1.0));
    }
  }
  return {worst_len <= 2.0 && worst_freq <= 0.01,
          Fmt("worst length error %.1f samples (limit 2), worst frequency error %.4f%% (limit 1%%)", worst_len,
              100.0 * worst_freq)};
}

// 6. Fast paths against exhaustive references.
Outcome CheckOracleEquivalence() {
  Rng rng(606);
  std::size_t pit_bad = 0, mixit_bad = 0, wer_bad = 0, bss_bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t s = 1 + std::size_t(t % 5);
    Eigen::MatrixXd m(s, s);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.Uniform(-20, 40);
    const auto fast = PitResolve(m);
    const auto slow = testing::PitBruteForce(m);
    pit_bad += fast.permutation != slow.perm || std::abs(fast.value - slow.total / double(s)) > 1e-9;
  }
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 2 + std::size_t(t % 3);  // 2..4 estimates into 2 mixtures
    std::vector<Waveform> ests;
    for (std::size_t i = 0; i < m; ++i) ests.push_back(Waveform::Mono(kFs, Gaussian(rng, 400)));
    const std::vector<Waveform> mixes = {Waveform::Mono(kFs, Gaussian(rng, 400)),
                                         Waveform::Mono(kFs, Gaussian(rng, 400))};
    mixit_bad += std::abs(MixitLoss(ests, mixes).value - testing::MixitBruteForce(ests, mixes)) > 1e-6;
  }
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
  for (int t = 0; t < 300; ++t) {
    const std::size_t s = 1 + std::size_t(t % 4);
    auto sentence = [&] {
      std::vector<std::string> w(std::size_t(rng.Uniform(0, 7)));
      for (auto& x : w) x = vocab[std::size_t(rng.Uniform(0, 4.999))];
      return w;
    };
    std::vector<std::vector<std::string>> hyps, refs;
    for (std::size_t i = 0; i < s; ++i) {
      hyps.push_back(sentence());
      std::vector<std::string> r = sentence();
      if (r.empty()) r.push_back("a");
      refs.push_back(r);
    }
    const auto fast = PermWer(hyps, refs);
    const auto slow = testing::WerBruteForce(hyps, refs);
    wer_bad += fast.edits != slow.edits || fast.permutation != slow.perm;
  }
  double bss_worst = 0.0;
  for (int t = 0; t < 48; ++t) {
    const std::size_t count = 1 + std::size_t(t % 3), taps = 1 + std::size_t(t % 8),
                      n = 64 * (1 + std::size_t(t % 8));  // up to 512
    std::vector<std::vector<double>> refs, ests;
    for (std::size_t j = 0; j < count; ++j) refs.push_back(Gaussian(rng, n));
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> e = Gaussian(rng, n, 0.4);
      for (std::size_t k = 0; k < n; ++k) {
        e[k] += refs[i][k] + (k > 1 ? 0.4 * refs[i][k - 2] : 0.0);
        if (count > 1) e[k] += 0.2 * refs[(i + 1) % count][k];
      }
      ests.push_back(e);
    }
    std::vector<Waveform> ew, rw;
    for (const auto& e : ests) ew.push_back(Waveform::Mono(kFs, e));
    for (const auto& r : refs) rw.push_back(Waveform::Mono(kFs, r));
    const auto fast = BssEval(ew, rw, taps);
    for (std::size_t i = 0; i < count; ++i) {
      const auto d = testing::DenseBssEval(ests[i], refs, fast.permutation[i], taps);
      const double diff = std::max({std::abs(fast.sdr[i] - d.sdr), std::abs(fast.sir[i] - d.sir),
                                    std::abs(fast.sar[i] - d.sar)});
      bss_worst = std::max(bss_worst, diff);
      bss_bad += diff > 1e-6;
    }
  }
  return {pit_bad + mixit_bad + wer_bad + bss_bad == 0,
          Fmt("mismatches: PIT %zu/1000, MixIT %zu/60, WER %zu/300, BSS %zu (worst %.2g dB)", pit_bad, mixit_bad,
              wer_bad, bss_bad, bss_worst)};
}

// 7. Metric identities.
Outcome CheckMetricIdentities() {
  Rng rng(707);
  double scale_dev = 0.0, sdr_dev = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto ref = Gaussian(rng, 4000);
    auto est = Gaussian(rng, 4000, 0.5);
    for (std::size_t k = 0; k < est.size(); ++k) est[k] += ref[k];
    const double base = SiSnr(est, ref);
    for (double a : {1e-3, 0.37, 5.0, 1e3}) {
      auto scaled = est;
      for (double& v : scaled) v *= a;
      scale_dev = std::max(scale_dev, std::abs(SiSnr(scaled, ref) - base));
    }
    // Mean-free signals: BSS-eval SDR with a single tap is SI-SNR.
    auto centered = [](std::vector<double> x) {
      double mean = 0.0;
      for (double v : x) mean += v / double(x.size());
      for (double& v : x) v -= mean;
      return x;
    };
    const auto r0 = centered(ref), e0 = centered(est);
    const auto bss = BssEval({Waveform::Mono(kFs, e0)}, {Waveform::Mono(kFs, r0)}, 1);
    sdr_dev = std::max(sdr_dev, std::abs(bss.sdr[0] - SiSnr(e0, r0)));
  }
  double min_self = 1.0;
  std::size_t monotone = 0;
  const std::size_t n = 3 * kFs;
  for (int u = 0; u < 5; ++u) {
    const Waveform clean = SynthSpeech(n, rng.Next());
    min_self = std::min(min_self, Stoi(clean, clean));
    const Waveform noise = GenNoise(n, 1, rng.Next());
    double prev = INFINITY;
    bool ok = true;
    for (double snr : {20.0, 0.0, -10.0}) {
      const double s = Stoi(MixAtSnr(clean, noise, snr).mixture, clean);
      ok = ok && s < prev;
      prev = s;
    }
    monotone += ok;
  }
  return {scale_dev <= 1e-9 && sdr_dev <= 1e-6 && min_self >= 0.999 && monotone == 5,
          Fmt("SI-SNR scale deviation %.2g dB (limit 1e-9); |SDR(L=1) - SI-SNR| %.2g dB (limit 1e-6); "
              "min STOI(x,x) %.6f; monotone over +20/0/-10 dB on %zu/5",
              scale_dev, sdr_dev, min_self, monotone)};
}

// 8. Determinism of the full recipe.
std::string Slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

Outcome CheckDeterminism() {
  const fs::path root = fs::temp_directory_path() / ("sepkit_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  auto run = [&](const std::string& name, const std::string& jobs) {
    const auto cfg = pipeline::LoadConfig(std::nullopt, {{"io.output_dir", (root / name).string()},
                                                         {"jobs", jobs},
                                                         {"seed", "2024"},
                                                         {"simulate.num_utts", "6"},
                                                         {"simulate.duration", "2.0"}});
    pipeline::Run(cfg, cfg.stages);
    return Slurp(root / name / "report.json") + Slurp(root / name / "report.csv");
  };
  const std::string a = run("a", "1"), b = run("b", "1"), c = run("c", "8");
  fs::remove_all(root);
  const bool same = !a.empty() && a == b && a == c;
  return {same, Fmt("two runs %s; --jobs 1 vs --jobs 8 %s", a == b ? "byte-identical" : "DIFFER",
                    a == c ? "byte-identical" : "DIFFER")};
}

// 9. RIR geometry and decay.

// Arrival of the earliest single-wall image, in samples.
double FirstReflection(const RirSpec& spec, std::size_t m) {
  double best = INFINITY;
  for (int axis = 0; axis < 3; ++axis) {
    for (double wall : {0.0, spec.room[std::size_t(axis)]}) {
      Point3 image = spec.source;
      image[std::size_t(axis)] = 2.0 * wall - image[std::size_t(axis)];
      const double dx = image[0] - spec.mics[m][0], dy = image[1] - spec.mics[m][1], dz = image[2] - spec.mics[m][2];
      best = std::min(best, std::sqrt(dx * dx + dy * dy + dz * dz));
    }
  }
  return best / spec.sound_speed * spec.fs;
}
Outcome CheckRir() {
  Rng rng(909);
  double worst_delay = 0.0;
  int configs = 0;
  while (configs < 50) {
    RirSpec spec;
    spec.room = {rng.Uniform(3.0, 9.0), rng.Uniform(3.0, 8.0), rng.Uniform(2.4, 4.0)};
    spec.t60 = configs % 2 ? rng.Uniform(0.15, 0.6) : 0.0;
    spec.source = Inside(rng, spec.room, 0.3);
    spec.mics = {Inside(rng, spec.room, 0.3), Inside(rng, spec.room, 0.3)};
    try {
      CheckRirSpec(spec);
    } catch (const Error&) {
      continue;  // absorption above 1 for this room; draw again
    }
    ++configs;
    const auto rirs = GenerateRir(spec);
    for (std::size_t m = 0; m < spec.mics.size(); ++m) {
      const auto& h = rirs[m].data[0];
      // Search up to halfway to the first reflection: in a reverberant tail
      // coinciding images can outgrow the direct pulse.
      const double expected = DirectSamples(spec, m);
      const auto end = std::min(h.size(), std::size_t(std::ceil(0.5 * (expected + FirstReflection(spec, m)))) + 1);
      std::size_t peak = 0;
      for (std::size_t k = 1; k < end; ++k)
        if (std::abs(h[k]) > std::abs(h[peak])) peak = k;
      worst_delay = std::max(worst_delay, std::abs(double(peak) - expected));
    }
  }
  // Decay: Schroeder backward integral, -5 to -35 dB fit, 10 positions per T60.
  std::string decay;
  bool decay_ok = true;
  for (double t60 : {0.2, 0.5}) {
    double t30 = 0.0, t20 = 0.0;
    for (int i = 0; i < 10; ++i) {
      RirSpec spec;
      spec.t60 = t60;
      spec.source = Inside(rng, spec.room, 0.5);
      spec.mics = {Inside(rng, spec.room, 0.5)};
      const auto h = GenerateRir(spec)[0].data[0];
      t30 += testing::SchroederT60(h, spec.fs, 30.0) / 10.0;
      t20 += testing::SchroederT60(h, spec.fs, 20.0) / 10.0;
    }
    decay_ok = decay_ok && std::abs(t30 / t60 - 1.0) <= 0.2;
    decay += Fmt("; T60 %.1f -> T30 %.3f s (%+.0f%%), T20 %.3f s", t60, t30, 100.0 * (t30 / t60 - 1.0), t20);
  }
  return {worst_delay <= 1.0 && decay_ok,
          Fmt("worst direct-path offset %.2f samples over 50 rooms (limit 1)", worst_delay) + decay};
}

}  // namespace
}  // namespace sepkit

// Optional arguments select criteria by number.
int main(int argc, char** argv) {
  using namespace sepkit;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"STFT perfect reconstruction", CheckStftReconstruction},
      {"oracle mask separation", CheckOracleSeparation},
      {"MVDR gain and distortionless constraint", CheckMvdr},
      {"WPE dereverberation", CheckWpe},
      {"speed perturbation", CheckSpeed},
      {"oracle equivalence", CheckOracleEquivalence},
      {"metric identities", CheckMetricIdentities},
      {"determinism", CheckDeterminism},
      {"RIR geometry and decay", CheckRir},
  };
  std::vector<bool> selected(criteria.size(), argc == 1);
  for (int a = 1; a < argc; ++a) {
    const int k = std::atoi(argv[a]);
    if (k < 1 || k > int(criteria.size())) {
      std::fprintf(stderr, "unknown criterion %s\n", argv[a]);
      return 2;
    }
    selected[std::size_t(k - 1)] = true;
  }
  int failures = 0, ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %zu. %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d of %d criteria failed\n", failures, ran);
  return failures == 0 ? 0 : 1;
}
