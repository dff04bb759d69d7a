// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sepkit/manifest.h"

#include <fstream>
#include <set>
#include <sstream>

#include "sepkit/error.h"

namespace sepkit {
namespace {

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = s.find(sep, start);
    out.push_back(s.substr(start, end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

[[noreturn]] void Malformed(std::size_t line_no, const std::string& why) {
  throw Error(Errc::kMalformedLine, "line " + std::to_string(line_no) + ": " + why);
}

void CheckPath(std::size_t line_no, const std::string& path) {
  if (path.empty()) Malformed(line_no, "empty path");
  if (path.find('|') != std::string::npos)
    Malformed(line_no, "pipe commands are not supported: '" + path + "'");
}

}  // namespace

const ManifestEntry* Manifest::Find(const std::string& utt_id) const {
  for (const auto& e : entries)
    if (e.utt_id == utt_id) return &e;
  return nullptr;
}

Manifest ParseManifest(const std::string& text) {
  Manifest manifest;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    auto fields = Split(line, '\t');
    if (fields.size() < 2 || fields.size() > 4)
      Malformed(line_no, "expected 2 to 4 tab-separated fields, got " +
                             std::to_string(fields.size()));
    ManifestEntry entry;
    entry.utt_id = fields[0];
    if (entry.utt_id.empty() || entry.utt_id.find_first_of(" \t") != std::string::npos)
      Malformed(line_no, "bad utterance id");
    entry.mixture = fields[1];
    CheckPath(line_no, entry.mixture);
    if (fields.size() >= 3 && !fields[2].empty()) {
      for (auto& ref : Split(fields[2], ',')) {
        CheckPath(line_no, ref);
        entry.references.push_back(ref);
      }
    }
    if (fields.size() == 4) {
      CheckPath(line_no, fields[3]);
      entry.noise = fields[3];
    }
    if (!seen.insert(entry.utt_id).second)
      throw Error(Errc::kDuplicateId,
                  "line " + std::to_string(line_no) + ": '" + entry.utt_id + "'");
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

Manifest ReadManifest(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::kFileNotFound, path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return ParseManifest(ss.str());
}

std::string SerializeManifest(const Manifest& manifest) {
  std::string out;
  for (const auto& e : manifest.entries) {
    out += e.utt_id;
    out += '\t';
    out += e.mixture;
    if (!e.references.empty() || e.noise) {
      out += '\t';
      for (std::size_t i = 0; i < e.references.size(); ++i) {
        if (i) out += ',';
        out += e.references[i];
      }
    }
    if (e.noise) {
      out += '\t';
      out += *e.noise;
    }
    out += '\n';
  }
  return out;
}

void WriteManifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(Errc::kUnwritable, path.string());
  os << SerializeManifest(manifest);
  if (!os) throw Error(Errc::kUnwritable, path.string());
}

}  // namespace sepkit
