// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_TOOLS_CONFIG_H_
#define SEPKIT_TOOLS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sepkit/audio.h"
#include "sepkit/masks.h"
#include "sepkit/simulate.h"
#include "sepkit/stft.h"
#include "sepkit/wpe.h"

namespace sepkit::pipeline {

using Json = nlohmann::ordered_json;

enum class Stage { kSimulate, kEnhance, kScore };
std::string StageName(Stage stage);

struct SimulateConfig {
  std::size_t num_utts = 10;
  std::size_t num_sources = 2;
  double duration = 4.0;  // seconds
  int sample_rate = 16000;
  std::size_t num_mics = 2;
  double mic_spacing = 0.08;  // meters, linear array along x
  Point3 room = {6.0, 5.0, 3.0};
  double t60 = 0.3;
  std::size_t max_order = 1000;
  std::string noise = "white";  // white | point | none
  double snr = 10.0;
  WavEncoding encoding = WavEncoding::kFloat32;
};

enum class StepKind { kWpe, kMask, kMvdr, kMpdr, kWpd };

struct ChainStep {
  StepKind kind = StepKind::kWpe;
  MaskKind mask = MaskKind::kIrm;  // for kMask
};

struct EnhanceConfig {
  std::vector<ChainStep> chain;
  WpeConfig wpe;
  std::size_t wpd_delay = 3;
  std::size_t wpd_taps = 5;
  std::size_t ref_channel = 0;
  bool auto_ref_channel = false;
  double mask_clip = kDefaultMaskClip;

  bool NeedsReferences() const;
  bool HasBeamformer() const;
};

struct ScoreConfig {
  std::vector<std::string> metrics = {"si_snr", "snr", "sdr", "sir", "sar", "stoi"};
  std::size_t filter_len = 512;
  bool trim = false;
  std::string estimates = "enhanced";  // enhanced | mixture
};

struct PipelineConfig {
  std::vector<Stage> stages = {Stage::kSimulate, Stage::kEnhance, Stage::kScore};
  uint64_t seed = 0;
  std::size_t jobs = 1;
  bool force = false;
  std::string input_manifest;  // empty: use the simulated corpus
  std::string output_dir = "exp";
  StftConfig stft;
  SimulateConfig simulate;
  EnhanceConfig enhance;
  ScoreConfig score;
};

std::string ChainStepName(const ChainStep& step);
ChainStep ParseChainStep(const std::string& token);
// Enforces: non-empty, wpe first, at most one mask and one beamformer, mask
// before beamformer.
void ValidateChain(const std::vector<ChainStep>& chain);

Json DefaultConfigJson();
PipelineConfig ConfigFromJson(const Json& json);
Json ConfigToJson(const PipelineConfig& cfg);

// Sets a dotted key ("stft.n_fft") to `value`, parsed as JSON when possible
// and kept as a string otherwise. Unknown keys are rejected.
void ApplyOverride(Json* json, const std::string& dotted_key, const std::string& value);

// Defaults, then the file (if any), then the overrides in order.
PipelineConfig LoadConfig(const std::optional<std::filesystem::path>& path,
                          const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace sepkit::pipeline

#endif  // SEPKIT_TOOLS_CONFIG_H_
