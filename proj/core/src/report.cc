// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sepkit/report.h"

#include <cstdio>
#include <fstream>
#include <set>

#include "json.hpp"
#include "sepkit/error.h"

namespace sepkit {
namespace {

using Json = nlohmann::ordered_json;

bool IsDbMetric(const std::string& name) { return name != "stoi"; }

Json Value(const std::string& name, double v) {
  if (IsDbMetric(name)) {
    if (v >= kDbCap) return "inf";
    if (v <= -kDbCap) return "-inf";
  }
  return v;
}

std::string Text(const std::string& name, double v) {
  if (IsDbMetric(name)) {
    if (v >= kDbCap) return "inf";
    if (v <= -kDbCap) return "-inf";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(Errc::kUnwritable, path.string());
  os << text;
  if (!os) throw Error(Errc::kUnwritable, path.string());
}

}  // namespace

void ScoreReport::Aggregate() {
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (const auto& u : per_utt)
    for (const auto& [name, v] : u.metrics) {
      sums[name].first += v;
      sums[name].second += 1;
    }
  aggregates.clear();
  for (const auto& [name, s] : sums) aggregates[name] = s.first / double(s.second);
}

std::string ScoreReport::ToJson() const {
  Json root;
  Json utts = Json::object();
  for (const auto& u : per_utt) {
    Json metrics = Json::object();
    for (const auto& [name, v] : u.metrics) metrics[name] = Value(name, v);
    utts[u.utt_id] = {{"metrics", metrics}, {"permutation", u.permutation}};
  }
  root["per_utt"] = utts;
  Json agg = Json::object();
  for (const auto& [name, v] : aggregates) agg[name] = Value(name, v);
  root["aggregates"] = agg;
  return root.dump(2) + "\n";
}

std::string ScoreReport::ToCsv() const {
  std::set<std::string> names;
  for (const auto& u : per_utt)
    for (const auto& [name, v] : u.metrics) names.insert(name);
  std::string out = "utt_id";
  for (const auto& n : names) out += "," + n;
  out += ",permutation\n";
  for (const auto& u : per_utt) {
    out += u.utt_id;
    for (const auto& n : names) {
      out += ",";
      auto it = u.metrics.find(n);
      if (it != u.metrics.end()) out += Text(n, it->second);
    }
    out += ",";
    for (std::size_t i = 0; i < u.permutation.size(); ++i) {
      if (i) out += " ";
      out += std::to_string(u.permutation[i]);
    }
    out += "\n";
  }
  return out;
}

void ScoreReport::Write(const std::filesystem::path& json_path,
                        const std::filesystem::path& csv_path) const {
  WriteText(json_path, ToJson());
  WriteText(csv_path, ToCsv());
}

}  // namespace sepkit
