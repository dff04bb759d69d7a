// Copyright 2026 The Sepkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// sepkit: simulate -> enhance -> score recipe driver.
//
//   sepkit run --config exp.json --jobs 4 --enhance.chain=wpe,mask:IRM,mvdr
//
// Any --section.key=value (or --section.key value) overrides the config file.

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "config.h"
#include "pipeline.h"
#include "sepkit/error.h"

namespace {

using sepkit::pipeline::Stage;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Flags {
  std::string config;
  std::optional<std::size_t> jobs;
  std::optional<uint64_t> seed;
  bool force = false;
};

CLI::App* AddStage(CLI::App& app, const std::string& name, const std::string& help, Flags& flags) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->allow_extras();
  sub->add_option("--config", flags.config, "Config file (JSON)")->check(CLI::ExistingFile);
  sub->add_option("--jobs", flags.jobs, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--seed", flags.seed, "Corpus seed");
  sub->add_flag("--force", flags.force, "Rerun stages even if up to date");
  return sub;
}

// Turns leftover "--a.b=v" / "--a.b v" arguments into key/value pairs.
std::vector<std::pair<std::string, std::string>> ParseOverrides(const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() == 2)
      throw sepkit::Error(sepkit::Errc::kInvalidConfig, "unexpected argument '" + arg + "'");
    const std::string body = arg.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    } else if (i + 1 < extras.size()) {
      out.emplace_back(body, extras[++i]);
    } else {
      throw sepkit::Error(sepkit::Errc::kInvalidConfig, "missing value for '" + arg + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sepkit: speech separation and enhancement recipes"};
  app.require_subcommand(1);
  Flags flags;
  struct Command {
    CLI::App* app;
    std::vector<Stage> stages;  // empty: the config's stages
  };
  const std::vector<Command> commands = {
      {AddStage(app, "simulate", "Generate the synthetic corpus", flags), {Stage::kSimulate}},
      {AddStage(app, "enhance", "Enhance every utterance of the manifest", flags), {Stage::kEnhance}},
      {AddStage(app, "score", "Score estimates against references", flags), {Stage::kScore}},
      {AddStage(app, "run", "Run the configured stages", flags), {}},
  };
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    for (const auto& cmd : commands) {
      if (!cmd.app->parsed()) continue;
      auto overrides = ParseOverrides(cmd.app->remaining());
      if (flags.jobs) overrides.emplace_back("jobs", std::to_string(*flags.jobs));
      if (flags.seed) overrides.emplace_back("seed", std::to_string(*flags.seed));
      if (flags.force) overrides.emplace_back("force", "true");
      std::optional<std::filesystem::path> path;
      if (!flags.config.empty()) path = flags.config;
      const auto cfg = sepkit::pipeline::LoadConfig(path, overrides);
      sepkit::pipeline::Run(cfg, cmd.stages.empty() ? cfg.stages : cmd.stages);
    }
  } catch (const sepkit::Error& e) {
    std::cerr << "sepkit: " << e.what() << "\n";
    return e.code() == sepkit::Errc::kInvalidConfig ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "sepkit: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
