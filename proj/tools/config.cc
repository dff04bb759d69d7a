// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "config.h"

#include <fstream>
#include <sstream>

#include "sepkit/error.h"
#include "sepkit/metrics.h"

namespace sepkit::pipeline {
namespace {

[[noreturn]] void Invalid(const std::string& what) { throw Error(Errc::kInvalidConfig, what); }

// Every key of `user` must exist in `reference`, recursively.
void CheckKnownKeys(const Json& user, const Json& reference, const std::string& prefix) {
  if (!user.is_object()) return;
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!reference.contains(it.key())) Invalid("unknown config key '" + key + "'");
    if (reference.at(it.key()).is_object()) {
      if (!it.value().is_object()) Invalid("'" + key + "' must be an object");
      CheckKnownKeys(it.value(), reference.at(it.key()), key);
    }
  }
}

template <typename T>
T Get(const Json& j, const char* key, const std::string& path) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    Invalid("bad value for '" + path + "." + key + "': " + e.what());
  }
}

std::size_t GetCount(const Json& j, const char* key, const std::string& path) {
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    Invalid("'" + path + "." + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

Point3 GetPoint(const Json& j, const char* key, const std::string& path) {
  auto v = Get<std::vector<double>>(j, key, path);
  if (v.size() != 3) Invalid("'" + path + "." + key + "' must have 3 entries");
  return {v[0], v[1], v[2]};
}

Stage ParseStage(const std::string& name) {
  if (name == "simulate") return Stage::kSimulate;
  if (name == "enhance") return Stage::kEnhance;
  if (name == "score") return Stage::kScore;
  Invalid("unknown stage '" + name + "'");
}

Json ParseValue(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception&) {
    return text;
  }
}

}  // namespace

std::string StageName(Stage stage) {
  switch (stage) {
    case Stage::kSimulate: return "simulate";
    case Stage::kEnhance: return "enhance";
    case Stage::kScore: return "score";
  }
  return "?";
}

bool EnhanceConfig::NeedsReferences() const {
  for (const auto& s : chain)
    if (s.kind != StepKind::kWpe) return true;
  return false;
}

bool EnhanceConfig::HasBeamformer() const {
  for (const auto& s : chain)
    if (s.kind == StepKind::kMvdr || s.kind == StepKind::kMpdr || s.kind == StepKind::kWpd)
      return true;
  return false;
}

std::string ChainStepName(const ChainStep& step) {
  switch (step.kind) {
    case StepKind::kWpe: return "wpe";
    case StepKind::kMask: return "mask:" + MaskKindName(step.mask);
    case StepKind::kMvdr: return "mvdr";
    case StepKind::kMpdr: return "mpdr";
    case StepKind::kWpd: return "wpd";
  }
  return "?";
}

ChainStep ParseChainStep(const std::string& token) {
  ChainStep step;
  if (token == "wpe") {
    step.kind = StepKind::kWpe;
  } else if (token == "mvdr") {
    step.kind = StepKind::kMvdr;
  } else if (token == "mpdr") {
    step.kind = StepKind::kMpdr;
  } else if (token == "wpd") {
    step.kind = StepKind::kWpd;
  } else if (token.rfind("mask:", 0) == 0) {
    auto kind = ParseMaskKind(token.substr(5));
    if (!kind) Invalid("unknown mask kind in '" + token + "'");
    step.kind = StepKind::kMask;
    step.mask = *kind;
  } else {
    Invalid("unknown enhancement step '" + token + "'");
  }
  return step;
}

void ValidateChain(const std::vector<ChainStep>& chain) {
  if (chain.empty()) Invalid("enhance.chain must not be empty");
  int rank = -1;  // wpe = 0, mask = 1, beamformer = 2
  for (const auto& step : chain) {
    const int r = step.kind == StepKind::kWpe ? 0 : step.kind == StepKind::kMask ? 1 : 2;
    if (r <= rank)
      Invalid("enhance.chain must be [wpe] [mask:KIND] [mvdr|mpdr|wpd] in that order, each at most once");
    rank = r;
  }
}

Json ConfigToJson(const PipelineConfig& cfg) {
  Json j;
  Json stages = Json::array();
  for (auto s : cfg.stages) stages.push_back(StageName(s));
  j["stages"] = stages;
  j["seed"] = cfg.seed;
  j["jobs"] = cfg.jobs;
  j["force"] = cfg.force;
  j["io"] = {{"input_manifest", cfg.input_manifest}, {"output_dir", cfg.output_dir}};
  j["stft"] = {{"n_fft", cfg.stft.n_fft},
               {"hop", cfg.stft.hop},
               {"window", cfg.stft.window == WindowType::kHann ? "hann" : "sqrt_hann"},
               {"center", cfg.stft.center}};
  const auto& sim = cfg.simulate;
  j["simulate"] = {{"num_utts", sim.num_utts},
                   {"num_sources", sim.num_sources},
                   {"duration", sim.duration},
                   {"sample_rate", sim.sample_rate},
                   {"num_mics", sim.num_mics},
                   {"mic_spacing", sim.mic_spacing},
                   {"room", std::vector<double>(sim.room.begin(), sim.room.end())},
                   {"t60", sim.t60},
                   {"max_order", sim.max_order},
                   {"noise", sim.noise},
                   {"snr", sim.snr},
                   {"encoding", sim.encoding == WavEncoding::kPcm16 ? "pcm16" : "float32"}};
  Json chain = Json::array();
  for (const auto& s : cfg.enhance.chain) chain.push_back(ChainStepName(s));
  const auto& enh = cfg.enhance;
  j["enhance"] = {{"chain", chain},
                  {"wpe",
                   {{"taps", enh.wpe.taps},
                    {"delay", enh.wpe.delay},
                    {"iterations", enh.wpe.iterations},
                    {"eps", enh.wpe.eps}}},
                  {"wpd", {{"delay", enh.wpd_delay}, {"taps", enh.wpd_taps}}},
                  {"ref_channel", enh.ref_channel},
                  {"auto_ref_channel", enh.auto_ref_channel},
                  {"mask_clip", enh.mask_clip}};
  j["score"] = {{"metrics", cfg.score.metrics},
                {"filter_len", cfg.score.filter_len},
                {"trim", cfg.score.trim},
                {"estimates", cfg.score.estimates}};
  return j;
}

Json DefaultConfigJson() {
  PipelineConfig cfg;
  cfg.enhance.chain = {ParseChainStep("mask:IRM"), ParseChainStep("mvdr")};
  return ConfigToJson(cfg);
}

PipelineConfig ConfigFromJson(const Json& user) {
  const Json defaults = DefaultConfigJson();
  if (!user.is_object()) Invalid("config must be a JSON object");
  CheckKnownKeys(user, defaults, "");
  Json j = defaults;
  j.merge_patch(user);

  PipelineConfig cfg;
  cfg.stages.clear();
  for (const auto& s : Get<std::vector<std::string>>(j, "stages", "")) cfg.stages.push_back(ParseStage(s));
  if (cfg.stages.empty()) Invalid("stages must not be empty");
  for (std::size_t i = 1; i < cfg.stages.size(); ++i)
    if (cfg.stages[i] <= cfg.stages[i - 1]) Invalid("stages must be an ordered subset of simulate, enhance, score");
  cfg.seed = Get<uint64_t>(j, "seed", "");
  cfg.jobs = GetCount(j, "jobs", "");
  if (cfg.jobs == 0) Invalid("jobs must be >= 1");
  cfg.force = Get<bool>(j, "force", "");

  const Json& io = j["io"];
  cfg.input_manifest = Get<std::string>(io, "input_manifest", "io");
  cfg.output_dir = Get<std::string>(io, "output_dir", "io");
  if (cfg.output_dir.empty()) Invalid("io.output_dir must not be empty");

  const Json& stft = j["stft"];
  cfg.stft.n_fft = GetCount(stft, "n_fft", "stft");
  cfg.stft.hop = GetCount(stft, "hop", "stft");
  const auto window = Get<std::string>(stft, "window", "stft");
  if (window == "hann") {
    cfg.stft.window = WindowType::kHann;
  } else if (window == "sqrt_hann") {
    cfg.stft.window = WindowType::kSqrtHann;
  } else {
    Invalid("stft.window must be hann or sqrt_hann");
  }
  cfg.stft.center = Get<bool>(stft, "center", "stft");
  CheckStftConfig(cfg.stft);
  if (!ValidateConfig(cfg.stft)) Invalid("stft window/hop pair does not satisfy overlap-add");

  const Json& sim = j["simulate"];
  auto& s = cfg.simulate;
  s.num_utts = GetCount(sim, "num_utts", "simulate");
  s.num_sources = GetCount(sim, "num_sources", "simulate");
  s.duration = Get<double>(sim, "duration", "simulate");
  s.sample_rate = Get<int>(sim, "sample_rate", "simulate");
  s.num_mics = GetCount(sim, "num_mics", "simulate");
  s.mic_spacing = Get<double>(sim, "mic_spacing", "simulate");
  s.room = GetPoint(sim, "room", "simulate");
  s.t60 = Get<double>(sim, "t60", "simulate");
  s.max_order = GetCount(sim, "max_order", "simulate");
  s.noise = Get<std::string>(sim, "noise", "simulate");
  s.snr = Get<double>(sim, "snr", "simulate");
  const auto enc = Get<std::string>(sim, "encoding", "simulate");
  if (enc == "float32") {
    s.encoding = WavEncoding::kFloat32;
  } else if (enc == "pcm16") {
    s.encoding = WavEncoding::kPcm16;
  } else {
    Invalid("simulate.encoding must be float32 or pcm16");
  }
  if (s.num_utts == 0 || s.num_sources == 0 || s.num_mics == 0)
    Invalid("simulate counts must be positive");
  if (!(s.duration > 0.0) || s.sample_rate <= 0) Invalid("simulate.duration and sample_rate must be positive");
  if (s.noise != "white" && s.noise != "point" && s.noise != "none")
    Invalid("simulate.noise must be white, point or none");
  if (!std::isfinite(s.snr)) Invalid("simulate.snr must be finite");

  const Json& enh = j["enhance"];
  auto& e = cfg.enhance;
  for (const auto& tok : Get<std::vector<std::string>>(enh, "chain", "enhance"))
    e.chain.push_back(ParseChainStep(tok));
  const bool enhancing = std::find(cfg.stages.begin(), cfg.stages.end(), Stage::kEnhance) != cfg.stages.end();
  if (enhancing || !e.chain.empty()) ValidateChain(e.chain);
  e.wpe.taps = GetCount(enh["wpe"], "taps", "enhance.wpe");
  e.wpe.delay = GetCount(enh["wpe"], "delay", "enhance.wpe");
  e.wpe.iterations = GetCount(enh["wpe"], "iterations", "enhance.wpe");
  e.wpe.eps = Get<double>(enh["wpe"], "eps", "enhance.wpe");
  CheckWpeConfig(e.wpe);
  e.wpd_delay = GetCount(enh["wpd"], "delay", "enhance.wpd");
  e.wpd_taps = GetCount(enh["wpd"], "taps", "enhance.wpd");
  e.ref_channel = GetCount(enh, "ref_channel", "enhance");
  e.auto_ref_channel = Get<bool>(enh, "auto_ref_channel", "enhance");
  e.mask_clip = Get<double>(enh, "mask_clip", "enhance");
  if (!(e.mask_clip > 0.0)) Invalid("enhance.mask_clip must be positive");

  const Json& sc = j["score"];
  cfg.score.metrics = Get<std::vector<std::string>>(sc, "metrics", "score");
  if (cfg.score.metrics.empty()) Invalid("score.metrics must not be empty");
  for (const auto& m : cfg.score.metrics)
    if (!IsKnownMetric(m)) Invalid("unknown metric '" + m + "'");
  cfg.score.filter_len = GetCount(sc, "filter_len", "score");
  if (cfg.score.filter_len == 0) Invalid("score.filter_len must be >= 1");
  cfg.score.trim = Get<bool>(sc, "trim", "score");
  cfg.score.estimates = Get<std::string>(sc, "estimates", "score");
  if (cfg.score.estimates != "enhanced" && cfg.score.estimates != "mixture")
    Invalid("score.estimates must be enhanced or mixture");
  return cfg;
}

void ApplyOverride(Json* json, const std::string& dotted_key, const std::string& value) {
  static const Json defaults = DefaultConfigJson();
  const Json* ref = &defaults;
  Json* node = json;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted_key.find('.', start);
    const std::string key = dotted_key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty() || !ref->is_object() || !ref->contains(key))
      Invalid("unknown config key '" + dotted_key + "'");
    ref = &ref->at(key);
    if (dot == std::string::npos) {
      Json parsed = ParseValue(value);
      // Lists given as a comma-separated word list: --enhance.chain=wpe,mask:IRM,mvdr
      if (ref->is_array() && parsed.is_string()) {
        Json arr = Json::array();
        std::stringstream ss(value);
        for (std::string item; std::getline(ss, item, ',');)
          if (!item.empty()) arr.push_back(item);
        parsed = arr;
      }
      (*node)[key] = parsed;
      return;
    }
    if (!node->contains(key) || !(*node)[key].is_object()) (*node)[key] = Json::object();
    node = &(*node)[key];
    start = dot + 1;
  }
}

PipelineConfig LoadConfig(const std::optional<std::filesystem::path>& path,
                          const std::vector<std::pair<std::string, std::string>>& overrides) {
  Json user = Json::object();
  if (path) {
    std::ifstream is(*path);
    if (!is) Invalid("cannot open config file " + path->string());
    try {
      user = Json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      Invalid("config file " + path->string() + ": " + e.what());
    }
  }
  for (const auto& [key, value] : overrides) ApplyOverride(&user, key, value);
  return ConfigFromJson(user);
}

}  // namespace sepkit::pipeline
