// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_METRICS_H_
#define SEPKIT_METRICS_H_

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sepkit/audio.h"

namespace sepkit {

// Every log ratio is clamped to [-kDbCap, kDbCap].
inline constexpr double kDbCap = 120.0;

// 10 log10(num / den) clamped to the cap. x/0 is +cap, 0/x is -cap, 0/0 is 0.
double CappedDb(double num, double den);

// Zero-mean SI-SNR. An estimate with no component along the reference
// (including an all-zero estimate) scores -120. Throws kInvalidArgument for
// a reference that is zero after mean removal.
double SiSnr(std::span<const double> est, std::span<const double> ref);
double SiSnr(const Waveform& est, const Waveform& ref);

double Snr(std::span<const double> est, std::span<const double> ref);
double Snr(const Waveform& est, const Waveform& ref);

struct WerResult {
  double wer = 0.0;
  std::size_t edits = 0;
  std::size_t ref_words = 0;
  std::vector<std::size_t> permutation;  // hypothesis i -> reference permutation[i]
};

std::vector<std::string> Tokenize(const std::string& text);
std::size_t EditDistance(const std::vector<std::string>& hyp, const std::vector<std::string>& ref);

// Total edits over total reference words, minimized over all pairings.
WerResult PermWer(const std::vector<std::vector<std::string>>& hyps,
                  const std::vector<std::vector<std::string>>& refs);

struct UttScore {
  std::string utt_id;
  std::map<std::string, double> metrics;
  std::vector<std::size_t> permutation;  // estimate i -> reference permutation[i]
};

struct ScoreOptions {
  std::set<std::string> metrics = {"si_snr", "snr", "sdr", "sir", "sar", "stoi"};
  std::size_t bss_filter_len = 512;
  // Trim every signal to the shortest length instead of failing.
  bool trim = false;
};

bool IsKnownMetric(const std::string& name);

// Scores S single-channel estimates against S references. The pairing comes
// from BSS-eval (max mean SDR) when any of sdr/sir/sar is requested, else
// from SI-SNR PIT, and is applied to every metric. Per-utterance values are
// means over sources.
UttScore ScoreUtterance(const std::string& utt_id, const std::vector<Waveform>& ests,
                        const std::vector<Waveform>& refs, const ScoreOptions& options);

}  // namespace sepkit

#endif  // SEPKIT_METRICS_H_
