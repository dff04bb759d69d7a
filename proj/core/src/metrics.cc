// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sepkit/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sepkit/bss_eval.h"
#include "sepkit/error.h"
#include "sepkit/permutation.h"
#include "sepkit/stoi.h"

namespace sepkit {
namespace {

double Mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
}

const Waveform& Mono(const Waveform& w, const char* what) {
  if (w.NumChannels() != 1)
    throw Error(Errc::kShapeMismatch, std::string(what) + " must be single-channel");
  return w;
}

void CheckSameLength(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(Errc::kShapeMismatch, "length mismatch: " + std::to_string(a.size()) + " vs " +
                                          std::to_string(b.size()));
}

}  // namespace

double CappedDb(double num, double den) {
  if (num == 0.0 && den == 0.0) return 0.0;
  if (den == 0.0) return kDbCap;
  if (num == 0.0) return -kDbCap;
  return std::clamp(10.0 * std::log10(num / den), -kDbCap, kDbCap);
}

double SiSnr(std::span<const double> est, std::span<const double> ref) {
  CheckSameLength(est, ref);
  const double est_mean = Mean(est), ref_mean = Mean(ref);
  double dot = 0.0, ref_energy = 0.0;
  for (std::size_t n = 0; n < ref.size(); ++n) {
    const double r = ref[n] - ref_mean;
    dot += (est[n] - est_mean) * r;
    ref_energy += r * r;
  }
  if (!(ref_energy > 0.0))
    throw Error(Errc::kInvalidArgument, "SI-SNR reference is zero after mean removal");
  const double scale = dot / ref_energy;
  double target = 0.0, residual = 0.0;
  for (std::size_t n = 0; n < ref.size(); ++n) {
    const double s = scale * (ref[n] - ref_mean);
    const double e = (est[n] - est_mean) - s;
    target += s * s;
    residual += e * e;
  }
  if (target == 0.0) return -kDbCap;
  return CappedDb(target, residual);
}

double SiSnr(const Waveform& est, const Waveform& ref) {
  return SiSnr(Mono(est, "estimate").data[0], Mono(ref, "reference").data[0]);
}

double Snr(std::span<const double> est, std::span<const double> ref) {
  CheckSameLength(est, ref);
  double signal = 0.0, noise = 0.0;
  for (std::size_t n = 0; n < ref.size(); ++n) {
    signal += ref[n] * ref[n];
    const double e = est[n] - ref[n];
    noise += e * e;
  }
  return CappedDb(signal, noise);
}

double Snr(const Waveform& est, const Waveform& ref) {
  return Snr(Mono(est, "estimate").data[0], Mono(ref, "reference").data[0]);
}

std::vector<std::string> Tokenize(const std::string& text) {
  std::istringstream is(text);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

std::size_t EditDistance(const std::vector<std::string>& hyp, const std::vector<std::string>& ref) {
  std::vector<std::size_t> prev(ref.size() + 1), cur(ref.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= hyp.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= ref.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[ref.size()];
}

WerResult PermWer(const std::vector<std::vector<std::string>>& hyps,
                  const std::vector<std::vector<std::string>>& refs) {
  if (refs.empty()) throw Error(Errc::kInvalidArgument, "empty reference set");
  if (hyps.size() != refs.size())
    throw Error(Errc::kShapeMismatch, "hypothesis and reference counts differ");
  if (refs.size() > 8) throw Error(Errc::kOutOfRange, "at most 8 streams");

  const std::size_t n = refs.size();
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i][j] = double(EditDistance(hyps[i], refs[j]));

  WerResult out;
  out.permutation = MinimizingPermutation(n, [&](std::size_t i, std::size_t j) { return cost[i][j]; });
  for (std::size_t i = 0; i < n; ++i) out.edits += std::size_t(cost[i][out.permutation[i]]);
  for (const auto& r : refs) out.ref_words += r.size();
  if (out.ref_words == 0) {
    if (out.edits != 0) throw Error(Errc::kInvalidArgument, "references contain no words");
    out.wer = 0.0;
  } else {
    out.wer = double(out.edits) / double(out.ref_words);
  }
  return out;
}

bool IsKnownMetric(const std::string& name) {
  static const std::set<std::string> kKnown = {"si_snr", "snr", "sdr", "sir", "sar", "stoi"};
  return kKnown.count(name) > 0;
}

UttScore ScoreUtterance(const std::string& utt_id, const std::vector<Waveform>& ests,
                        const std::vector<Waveform>& refs, const ScoreOptions& options) {
  if (refs.empty()) throw Error(Errc::kMissingData, utt_id + ": no references");
  if (ests.size() != refs.size())
    throw Error(Errc::kShapeMismatch, utt_id + ": " + std::to_string(ests.size()) +
                                          " estimates for " + std::to_string(refs.size()) +
                                          " references");
  for (const auto& m : options.metrics)
    if (!IsKnownMetric(m)) throw Error(Errc::kInvalidConfig, "unknown metric '" + m + "'");

  std::size_t len = refs[0].NumSamples();
  std::vector<Waveform> e, r;
  for (const auto& w : ests) e.push_back(Mono(w, "estimate"));
  for (const auto& w : refs) r.push_back(Mono(w, "reference"));
  for (const auto* group : {&e, &r}) {
    for (const auto& w : *group) {
      if (w.NumSamples() != len && !options.trim)
        throw Error(Errc::kShapeMismatch, utt_id + ": length mismatch " +
                                              std::to_string(w.NumSamples()) + " vs " +
                                              std::to_string(len));
      len = std::min(len, w.NumSamples());
    }
  }
  for (auto* group : {&e, &r})
    for (auto& w : *group) w.data[0].resize(len);

  const std::size_t count = r.size();
  const auto& wanted = options.metrics;
  const bool want_bss = wanted.count("sdr") || wanted.count("sir") || wanted.count("sar");

  UttScore score;
  score.utt_id = utt_id;
  BssEvalResult bss;
  if (want_bss) {
    bss = BssEval(e, r, options.bss_filter_len);
    score.permutation = bss.permutation;
  } else {
    std::vector<std::vector<double>> si(count, std::vector<double>(count));
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < count; ++j) si[i][j] = SiSnr(e[i].data[0], r[j].data[0]);
    score.permutation =
        MinimizingPermutation(count, [&](std::size_t i, std::size_t j) { return -si[i][j]; });
  }

  auto mean_over = [&](auto&& fn) {
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) total += fn(i, score.permutation[i]);
    return total / double(count);
  };
  if (wanted.count("si_snr"))
    score.metrics["si_snr"] =
        mean_over([&](std::size_t i, std::size_t j) { return SiSnr(e[i].data[0], r[j].data[0]); });
  if (wanted.count("snr"))
    score.metrics["snr"] =
        mean_over([&](std::size_t i, std::size_t j) { return Snr(e[i].data[0], r[j].data[0]); });
  if (wanted.count("stoi"))
    score.metrics["stoi"] = mean_over([&](std::size_t i, std::size_t j) {
      return Stoi(e[i].data[0], r[j].data[0], r[j].sample_rate);
    });
  if (want_bss) {
    auto avg = [&](const std::vector<double>& v) {
      return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
    };
    if (wanted.count("sdr")) score.metrics["sdr"] = avg(bss.sdr);
    if (wanted.count("sir")) score.metrics["sir"] = avg(bss.sir);
    if (wanted.count("sar")) score.metrics["sar"] = avg(bss.sar);
  }
  return score;
}

}  // namespace sepkit
