// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_REPORT_H_
#define SEPKIT_REPORT_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sepkit/metrics.h"

namespace sepkit {

// Per-utterance scores in manifest order plus per-metric means. A metric's
// mean only covers the utterances that carry it.
struct ScoreReport {
  std::vector<UttScore> per_utt;
  std::map<std::string, double> aggregates;

  void Add(UttScore score) { per_utt.push_back(std::move(score)); }
  void Aggregate();

  // Values at the +/-120 dB cap are written as "inf" / "-inf".
  std::string ToJson() const;
  std::string ToCsv() const;
  void Write(const std::filesystem::path& json_path, const std::filesystem::path& csv_path) const;
};

}  // namespace sepkit

#endif  // SEPKIT_REPORT_H_
