// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "pipeline.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "sepkit/beamformer.h"
#include "sepkit/error.h"
#include "sepkit/masks.h"
#include "sepkit/metrics.h"
#include "sepkit/report.h"
#include "sepkit/simulate.h"
#include "sepkit/stft.h"
#include "sepkit/wpe.h"

namespace sepkit::pipeline {
namespace {

constexpr double kSourceRms = 0.05;
constexpr double kPeakLimit = 0.9;
constexpr double kWallMargin = 0.4;

std::string UttId(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "utt%04zu", index);
  return buf;
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw Error(Errc::kUnwritable, "cannot create directory " + dir.string());
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::kUnwritable, "cannot write " + path.string());
  os << text;
  if (!os) throw Error(Errc::kUnwritable, "cannot write " + path.string());
}

std::string ReadText(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

// Prefixes an error with the utterance it came from.
[[noreturn]] void Rethrow(const std::string& utt_id) {
  try {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), utt_id + ": " + e.what());
  }
}

double Rms(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return x.empty() ? 0.0 : std::sqrt(acc / double(x.size()));
}

Waveform Scaled(Waveform w, double gain) {
  for (auto& ch : w.data)
    for (double& v : ch) v *= gain;
  return w;
}

double Peak(const Waveform& w) {
  double p = 0.0;
  for (const auto& ch : w.data)
    for (double v : ch) p = std::max(p, std::abs(v));
  return p;
}

// Random point at `distance` from `center` in the horizontal plane, kept
// away from the walls. Falls back to the closest admissible point.
Point3 PlaceAround(Rng& rng, const Point3& center, const Point3& room) {
  Point3 p = center;
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double r = rng.Uniform(1.0, 2.0);
    const double phi = rng.Uniform(0.0, 2.0 * std::numbers::pi);
    p = {center[0] + r * std::cos(phi), center[1] + r * std::sin(phi),
         std::clamp(center[2] + rng.Uniform(-0.2, 0.2), kWallMargin, room[2] - kWallMargin)};
    if (p[0] > kWallMargin && p[0] < room[0] - kWallMargin && p[1] > kWallMargin &&
        p[1] < room[1] - kWallMargin)
      return p;
  }
  for (int d = 0; d < 2; ++d) p[d] = std::clamp(p[d], kWallMargin, room[d] - kWallMargin);
  return p;
}

Json PointJson(const Point3& p) { return Json::array({p[0], p[1], p[2]}); }

void SimulateOne(const PipelineConfig& cfg, std::size_t index, ManifestEntry* entry) {
  const SimulateConfig& sc = cfg.simulate;
  const std::string utt = UttId(index);
  const uint64_t seed = cfg.seed ^ uint64_t(index);
  Rng rng(seed);
  const fs::path data = fs::path(cfg.output_dir) / "data";
  const std::size_t n = std::size_t(std::llround(sc.duration * sc.sample_rate));
  const std::size_t ref = cfg.enhance.ref_channel;
  if (n == 0) throw Error(Errc::kInvalidConfig, "simulate.duration yields no samples");
  if (ref >= sc.num_mics) throw Error(Errc::kInvalidConfig, "enhance.ref_channel exceeds simulate.num_mics");

  // Linear array along x, centred at a random spot in the room.
  const double half = 0.5 * sc.mic_spacing * double(sc.num_mics - 1);
  const double lo = std::min(kWallMargin + half + 0.5, 0.5 * sc.room[0]);
  Point3 center = {rng.Uniform(lo, std::max(lo, sc.room[0] - lo)),
                   rng.Uniform(std::min(1.0, 0.5 * sc.room[1]), std::max(0.5 * sc.room[1], sc.room[1] - 1.0)),
                   std::min(1.5, 0.5 * sc.room[2])};
  RirSpec rir;
  rir.room = sc.room;
  rir.t60 = sc.t60;
  rir.max_order = sc.max_order;
  rir.fs = sc.sample_rate;
  rir.mics.clear();
  for (std::size_t m = 0; m < sc.num_mics; ++m)
    rir.mics.push_back({center[0] - half + sc.mic_spacing * double(m), center[1], center[2]});

  Json meta;
  meta["utt_id"] = utt;
  meta["seed"] = seed;
  meta["sample_rate"] = sc.sample_rate;
  meta["num_samples"] = n;
  meta["mix"] = {{"snr", sc.snr}, {"sources", sc.num_sources}, {"noise", sc.noise}};
  meta["rir"] = {{"room", PointJson(sc.room)}, {"t60", sc.t60}, {"max_order", sc.max_order}};
  Json mics = Json::array();
  for (const auto& m : rir.mics) mics.push_back(PointJson(m));
  meta["rir"]["mics"] = mics;
  meta["rir"]["sources"] = Json::array();

  Waveform speech(sc.sample_rate, sc.num_mics, n);
  std::vector<Waveform> images;
  for (std::size_t s = 0; s < sc.num_sources; ++s) {
    rir.source = PlaceAround(rng, center, sc.room);
    const Waveform dry = SynthSpeech(n, rng.Next(), sc.sample_rate);
    const auto rirs = GenerateRir(rir);
    Waveform image(sc.sample_rate, sc.num_mics, n);
    for (std::size_t m = 0; m < sc.num_mics; ++m) image.data[m] = Convolve(dry, rirs[m]).data[0];
    const double level = Rms(image.Channel(ref));
    if (!(level > 0.0)) throw Error(Errc::kNumerical, "silent source image");
    image = Scaled(std::move(image), kSourceRms / level);
    for (std::size_t m = 0; m < sc.num_mics; ++m)
      for (std::size_t i = 0; i < n; ++i) speech.data[m][i] += image.data[m][i];
    meta["rir"]["sources"].push_back(PointJson(rir.source));
    images.push_back(std::move(image));
  }

  Waveform mixture = speech;
  std::optional<Waveform> noise;
  if (sc.noise != "none") {
    Waveform raw;
    if (sc.noise == "white") {
      raw = GenNoise(n, sc.num_mics, rng.Next(), NoiseKind::kWhite, sc.sample_rate);
    } else {  // point
      rir.source = PlaceAround(rng, center, sc.room);
      const Waveform dry = GenNoise(n, 1, rng.Next(), NoiseKind::kWhite, sc.sample_rate);
      const auto rirs = GenerateRir(rir);
      raw = Waveform(sc.sample_rate, sc.num_mics, n);
      for (std::size_t m = 0; m < sc.num_mics; ++m) raw.data[m] = Convolve(dry, rirs[m]).data[0];
      meta["rir"]["noise_source"] = PointJson(rir.source);
    }
    MixResult mix = MixAtSnr(speech, raw, sc.snr);
    mixture = std::move(mix.mixture);
    noise = std::move(mix.scaled_noise);
    meta["mix"]["noise_gain"] = mix.gain;
  }

  double gain = 1.0;
  if (const double peak = Peak(mixture); peak > kPeakLimit) gain = kPeakLimit / peak;
  meta["mix"]["output_gain"] = gain;

  entry->utt_id = utt;
  entry->mixture = "mix/" + utt + ".wav";
  WriteWav(data / entry->mixture, Scaled(mixture, gain), sc.encoding);
  for (std::size_t s = 0; s < images.size(); ++s) {
    const std::string path = "ref/" + utt + "_s" + std::to_string(s) + ".wav";
    WriteWav(data / path, Scaled(images[s].Select(ref), gain), sc.encoding);
    entry->references.push_back(path);
  }
  if (noise) {
    entry->noise = "noise/" + utt + ".wav";
    WriteWav(data / *entry->noise, Scaled(noise->Select(ref), gain), sc.encoding);
  }
  WriteText(data / "meta" / (utt + ".json"), meta.dump(2) + "\n");
}

// Single channel used for masks and outputs: the reference channel when the
// signal is multichannel, else its only channel.
Waveform MaskChannel(const Waveform& w, std::size_t ref) {
  if (w.NumChannels() == 1) return w;
  if (ref >= w.NumChannels()) throw Error(Errc::kShapeMismatch, "reference channel out of range");
  return w.Select(ref);
}

Waveform ToWave(const ComplexSpectrogram& spec) { return Synthesize(spec); }

std::vector<TimeFreqMask> OracleMasks(const EnhanceConfig& cfg, const StftConfig& stft,
                                      const Waveform& mixture, const std::vector<Waveform>& refs,
                                      const Waveform* noise, MaskKind kind) {
  std::vector<ComplexSpectrogram> sources;
  for (const auto& r : refs) sources.push_back(Analyze(MaskChannel(r, cfg.ref_channel), stft));
  if (noise) sources.push_back(Analyze(MaskChannel(*noise, cfg.ref_channel), stft));
  const ComplexSpectrogram y = Analyze(MaskChannel(mixture, cfg.ref_channel), stft);
  return ComputeOracleMasks(sources, y, kind, cfg.mask_clip);
}

// Non-negative weights for covariance estimation (PSM may go negative).
TimeFreqMask NonNegative(TimeFreqMask m) {
  for (double& v : m.values) v = std::max(v, 0.0);
  return m;
}

}  // namespace

void ParallelFor(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(std::max<std::size_t>(jobs, 1), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

fs::path SimulatedManifestPath(const PipelineConfig& cfg) {
  return fs::path(cfg.output_dir) / "data" / "manifest.tsv";
}

fs::path EnhancedManifestPath(const PipelineConfig& cfg) {
  return fs::path(cfg.output_dir) / "enhanced" / "manifest.tsv";
}

fs::path InputManifestPath(const PipelineConfig& cfg) {
  return cfg.input_manifest.empty() ? SimulatedManifestPath(cfg) : fs::path(cfg.input_manifest);
}

fs::path ResolvePath(const fs::path& manifest, const std::string& entry_path) {
  const fs::path p(entry_path);
  return p.is_absolute() ? p : manifest.parent_path() / p;
}

std::vector<Waveform> EnhanceUtterance(const EnhanceConfig& cfg, const StftConfig& stft,
                                       const Waveform& mixture,
                                       const std::vector<Waveform>& references,
                                       const Waveform* noise) {
  ValidateChain(cfg.chain);
  const std::size_t channels = mixture.NumChannels();
  if (cfg.ref_channel >= channels)
    throw Error(Errc::kShapeMismatch, "enhance.ref_channel " + std::to_string(cfg.ref_channel) +
                                          " but mixture has " + std::to_string(channels) + " channel(s)");
  if (cfg.HasBeamformer() && channels < 2)
    throw Error(Errc::kShapeMismatch, "beamforming needs at least 2 channels, mixture has " +
                                          std::to_string(channels));
  if (cfg.NeedsReferences() && references.empty())
    throw Error(Errc::kMissingData, "chain needs oracle masks but the manifest has no references");

  std::optional<MaskKind> mask_kind;
  std::optional<StepKind> beamformer;
  bool wpe = false;
  for (const auto& step : cfg.chain) {
    if (step.kind == StepKind::kWpe) wpe = true;
    else if (step.kind == StepKind::kMask) mask_kind = step.mask;
    else beamformer = step.kind;
  }

  ComplexSpectrogram y = Analyze(mixture, stft);
  if (wpe) y = Wpe(y, cfg.wpe);

  std::vector<Waveform> outputs;
  if (!mask_kind && !beamformer) {
    // Dereverberation only: one output per reference (at least one).
    const Waveform out = ToWave(y.SelectChannel(cfg.ref_channel));
    outputs.assign(std::max<std::size_t>(references.size(), 1), out);
    return outputs;
  }

  const auto masks = OracleMasks(cfg, stft, mixture, references, noise,
                                 mask_kind.value_or(MaskKind::kIrm));
  const std::size_t num_sources = references.size();
  if (!beamformer) {
    const ComplexSpectrogram ref_spec = y.SelectChannel(cfg.ref_channel);
    for (std::size_t s = 0; s < num_sources; ++s) outputs.push_back(ToWave(ApplyMask(ref_spec, masks[s])));
    return outputs;
  }

  const std::size_t frames = y.NumFrames(), bins = y.NumBins();
  for (std::size_t s = 0; s < num_sources; ++s) {
    const TimeFreqMask speech = NonNegative(masks[s]);
    TimeFreqMask interference(frames, bins, speech.kind, speech.clip, 0.0);
    if (masks.size() > 1) {
      for (std::size_t j = 0; j < masks.size(); ++j)
        if (j != s)
          for (std::size_t k = 0; k < interference.values.size(); ++k)
            interference.values[k] += std::max(masks[j].values[k], 0.0);
    } else {
      for (std::size_t k = 0; k < interference.values.size(); ++k)
        interference.values[k] = std::max(1.0 - speech.values[k], 0.0);
    }

    const SpatialCovariance scm_s = EstimateScm(y, speech);
    const SpatialCovariance scm_n = EstimateScm(y, interference);
    const std::size_t ref = cfg.auto_ref_channel ? SelectReferenceChannel(scm_s, scm_n) : cfg.ref_channel;
    ComplexSpectrogram out;
    switch (*beamformer) {
      case StepKind::kMvdr:
        out = ApplyBeamformer(MvdrSouden(scm_s, scm_n, ref), y);
        break;
      case StepKind::kMpdr: {
        const SpatialCovariance scm_y = EstimateScm(y, TimeFreqMask(frames, bins, speech.kind, speech.clip, 1.0));
        out = ApplyBeamformer(Mpdr(scm_y, SteeringVectors(scm_s), ref), y);
        break;
      }
      default:
        out = Wpd(y, speech, cfg.wpd_delay, cfg.wpd_taps, ref);
        break;
    }
    outputs.push_back(ToWave(out));
  }
  return outputs;
}

void RunSimulate(const PipelineConfig& cfg) {
  const fs::path data = fs::path(cfg.output_dir) / "data";
  for (const char* sub : {"mix", "ref", "noise", "meta"}) EnsureDir(data / sub);
  std::vector<ManifestEntry> entries(cfg.simulate.num_utts);
  ParallelFor(entries.size(), cfg.jobs, [&](std::size_t i) {
    try {
      SimulateOne(cfg, i, &entries[i]);
    } catch (...) {
      Rethrow(UttId(i));
    }
  });
  WriteManifest(SimulatedManifestPath(cfg), Manifest{entries});
}

void RunEnhance(const PipelineConfig& cfg) {
  const fs::path in_path = InputManifestPath(cfg);
  if (!fs::exists(in_path)) throw Error(Errc::kFileNotFound, "input manifest " + in_path.string() + " not found");
  const Manifest in = ReadManifest(in_path);
  const fs::path out_dir = fs::path(cfg.output_dir) / "enhanced";
  EnsureDir(out_dir);
  std::vector<ManifestEntry> entries(in.entries.size());
  ParallelFor(entries.size(), cfg.jobs, [&](std::size_t i) {
    const ManifestEntry& e = in.entries[i];
    try {
      const Waveform mixture = ReadWav(ResolvePath(in_path, e.mixture));
      std::vector<Waveform> refs;
      for (const auto& r : e.references) refs.push_back(ReadWav(ResolvePath(in_path, r)));
      std::optional<Waveform> noise;
      if (e.noise) noise = ReadWav(ResolvePath(in_path, *e.noise));
      const auto outputs = EnhanceUtterance(cfg.enhance, cfg.stft, mixture, refs, noise ? &*noise : nullptr);
      ManifestEntry& out = entries[i];
      out.utt_id = e.utt_id;
      out.mixture = fs::absolute(ResolvePath(in_path, e.mixture)).lexically_normal().string();
      for (std::size_t s = 0; s < outputs.size(); ++s) {
        const std::string name = e.utt_id + "_s" + std::to_string(s) + ".wav";
        WriteWav(out_dir / name, outputs[s], WavEncoding::kFloat32);
        out.references.push_back(name);
      }
    } catch (...) {
      Rethrow(e.utt_id);
    }
  });
  WriteManifest(EnhancedManifestPath(cfg), Manifest{entries});
}

void RunScore(const PipelineConfig& cfg) {
  const fs::path ref_path = InputManifestPath(cfg);
  if (!fs::exists(ref_path)) throw Error(Errc::kFileNotFound, "reference manifest " + ref_path.string() + " not found");
  const Manifest refs = ReadManifest(ref_path);
  const bool use_mixture = cfg.score.estimates == "mixture";
  const fs::path est_path = EnhancedManifestPath(cfg);
  Manifest ests;
  if (!use_mixture) {
    if (!fs::exists(est_path)) throw Error(Errc::kFileNotFound, "estimate manifest " + est_path.string() + " not found");
    ests = ReadManifest(est_path);
  }
  ScoreOptions options;
  options.metrics = std::set<std::string>(cfg.score.metrics.begin(), cfg.score.metrics.end());
  options.bss_filter_len = cfg.score.filter_len;
  options.trim = cfg.score.trim;

  std::vector<UttScore> scores(refs.entries.size());
  ParallelFor(scores.size(), cfg.jobs, [&](std::size_t i) {
    const ManifestEntry& r = refs.entries[i];
    try {
      if (r.references.empty()) throw Error(Errc::kMissingData, "no references to score against");
      std::vector<Waveform> ref_waves;
      for (const auto& p : r.references) ref_waves.push_back(MaskChannel(ReadWav(ResolvePath(ref_path, p)), cfg.enhance.ref_channel));
      std::vector<Waveform> est_waves;
      if (use_mixture) {
        const Waveform mix = MaskChannel(ReadWav(ResolvePath(ref_path, r.mixture)), cfg.enhance.ref_channel);
        est_waves.assign(ref_waves.size(), mix);
      } else {
        const ManifestEntry* e = ests.Find(r.utt_id);
        if (!e) throw Error(Errc::kMissingData, "no estimates for utterance " + r.utt_id);
        for (const auto& p : e->references) est_waves.push_back(ReadWav(ResolvePath(est_path, p)));
      }
      scores[i] = ScoreUtterance(r.utt_id, est_waves, ref_waves, options);
    } catch (...) {
      Rethrow(r.utt_id);
    }
  });
  ScoreReport report;
  for (auto& s : scores) report.Add(std::move(s));
  report.Aggregate();
  report.Write(fs::path(cfg.output_dir) / "report.json", fs::path(cfg.output_dir) / "report.csv");
}

void Run(const PipelineConfig& cfg, const std::vector<Stage>& stages) {
  const fs::path out(cfg.output_dir);
  EnsureDir(out);
  Json resolved = ConfigToJson(cfg);
  WriteText(out / "config.resolved.json", resolved.dump(2) + "\n");

  // Markers record the config that produced a stage; scheduling knobs are
  // excluded since they do not change the outputs.
  for (const char* key : {"stages", "jobs", "force"}) resolved.erase(key);
  const std::string fingerprint = resolved.dump(2) + "\n";
  bool upstream_ran = false;
  for (Stage stage : stages) {
    const fs::path marker = out / (".stage_" + StageName(stage) + ".json");
    if (!cfg.force && !upstream_ran && fs::exists(marker) && ReadText(marker) == fingerprint) {
      std::cerr << "sepkit: " << StageName(stage) << " is up to date, skipping\n";
      continue;
    }
    // This stage and everything downstream of it become stale.
    for (Stage later : {Stage::kSimulate, Stage::kEnhance, Stage::kScore}) {
      std::error_code ec;
      if (later >= stage) fs::remove(out / (".stage_" + StageName(later) + ".json"), ec);
    }
    switch (stage) {
      case Stage::kSimulate: RunSimulate(cfg); break;
      case Stage::kEnhance: RunEnhance(cfg); break;
      case Stage::kScore: RunScore(cfg); break;
    }
    WriteText(marker, fingerprint);
    upstream_ran = true;
  }
}

}  // namespace sepkit::pipeline
