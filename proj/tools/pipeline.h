// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SEPKIT_TOOLS_PIPELINE_H_
#define SEPKIT_TOOLS_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <vector>

#include "config.h"
#include "sepkit/audio.h"
#include "sepkit/manifest.h"

namespace sepkit::pipeline {

namespace fs = std::filesystem;

// Runs fn(0..n-1) on up to `jobs` threads. If any call throws, the
// exception of the lowest failing index is rethrown after all workers stop.
void ParallelFor(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

// Layout under output_dir.
fs::path SimulatedManifestPath(const PipelineConfig& cfg);  // data/manifest.tsv
fs::path EnhancedManifestPath(const PipelineConfig& cfg);   // enhanced/manifest.tsv
fs::path InputManifestPath(const PipelineConfig& cfg);      // io.input_manifest or simulated

// Resolves a manifest path relative to the manifest's own directory.
fs::path ResolvePath(const fs::path& manifest, const std::string& entry_path);

// Single-utterance enhancement: applies the chain to `mixture`. References
// (and the optional noise signal) feed the oracle masks; the mask channel is
// enhance.ref_channel. Returns one single-channel waveform per output.
std::vector<Waveform> EnhanceUtterance(const EnhanceConfig& cfg, const StftConfig& stft,
                                       const Waveform& mixture,
                                       const std::vector<Waveform>& references,
                                       const Waveform* noise);

void RunSimulate(const PipelineConfig& cfg);
void RunEnhance(const PipelineConfig& cfg);
void RunScore(const PipelineConfig& cfg);

// Runs the given stages in order, skipping a stage whose marker matches the
// current config unless cfg.force. Always writes config.resolved.json.
void Run(const PipelineConfig& cfg, const std::vector<Stage>& stages);

}  // namespace sepkit::pipeline

#endif  // SEPKIT_TOOLS_PIPELINE_H_
