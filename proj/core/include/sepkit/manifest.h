// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_MANIFEST_H_
#define SEPKIT_MANIFEST_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sepkit {

// One utterance: the mixture, its reference sources and an optional noise
// reference. Paths are stored exactly as written in the file.
struct ManifestEntry {
  std::string utt_id;
  std::string mixture;
  std::vector<std::string> references;
  std::optional<std::string> noise;

  bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;

  const ManifestEntry* Find(const std::string& utt_id) const;
  bool operator==(const Manifest&) const = default;
};

// Line format (tab separated):
//   utt_id  mixture  ref1,ref2,...  [noise]
// The reference column may be omitted for reference-free data. Blank lines
// and lines starting with '#' are skipped. Shell pipes are rejected.
Manifest ParseManifest(const std::string& text);
Manifest ReadManifest(const std::filesystem::path& path);

std::string SerializeManifest(const Manifest& manifest);
void WriteManifest(const std::filesystem::path& path, const Manifest& manifest);

}  // namespace sepkit

#endif  // SEPKIT_MANIFEST_H_
