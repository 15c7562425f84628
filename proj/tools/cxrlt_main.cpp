/*
 * Copyright 2026 The cxrlt Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cxrlt/pipeline/config.hpp"
#include "cxrlt/pipeline/runner.hpp"
#include "cxrlt/util/error.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string stage;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_stage) {
  cmd->add_option("--config", args.config_path, "Run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_dir,
                  "Run directory (default: out_dir from the config)");
  cmd->add_option("--seed", args.seed, "Override the configured seed");
  if (with_stage) {
    cmd->add_option("--stage", args.stage, "Run only this training stage");
  }
}

int run_phase(const CommonArgs& args,
              std::optional<cxrlt::pipeline::Phase> phase) {
  const std::string label =
      phase ? cxrlt::pipeline::phase_name(*phase) : std::string("pipeline");
  try {
    auto config = cxrlt::pipeline::load_config(args.config_path);
    cxrlt::pipeline::RunOptions options;
    options.seed = args.seed;
    options.stage = args.stage;
    if (phase) {
      // Single phases operate in place; default to the configured out_dir.
      options.out_dir = args.out_dir.empty() ? config.out_dir : args.out_dir;
    } else {
      options.out_dir = args.out_dir;
    }
    cxrlt::pipeline::PipelineRunner runner(std::move(config), options);
    if (phase) {
      runner.run(*phase);
    } else {
      runner.run_all();
    }
    std::cout << runner.run_dir() << "\n";
    return 0;
  } catch (const cxrlt::Error& e) {
    std::cerr << "cxrlt " << label << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "cxrlt " << label << ": unexpected error: " << e.what()
              << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Config-driven multi-label chest X-ray training and evaluation"};
  app.require_subcommand(1);

  using cxrlt::pipeline::Phase;
  struct Entry {
    const char* name;
    const char* help;
    std::optional<Phase> phase;
    bool with_stage;
  };
  const Entry entries[] = {
      {"ingest", "Build the label registry and canonical dataset tables",
       Phase::kIngest, false},
      {"split", "Produce patient-level splits and the category map",
       Phase::kSplit, false},
      {"train", "Run the configured training stages", Phase::kTrain, true},
      {"predict", "Score the evaluation split with trained checkpoints",
       Phase::kPredict, false},
      {"ensemble", "Average member score files", Phase::kEnsemble, false},
      {"evaluate", "Compute per-label AP reports from score files",
       Phase::kEvaluate, false},
      {"report", "Render comparison tables and plots", Phase::kReport, false},
      {"prompts", "Generate a tail-focused prompt manifest", Phase::kPrompts,
       false},
      {"pipeline", "Run every phase into a fresh run-stamped directory",
       std::nullopt, true},
  };

  CommonArgs args[sizeof(entries) / sizeof(entries[0])];
  size_t i = 0;
  for (const Entry& entry : entries) {
    CLI::App* cmd = app.add_subcommand(entry.name, entry.help);
    add_common(cmd, args[i], entry.with_stage);
    ++i;
  }

  CLI11_PARSE(app, argc, argv);

  i = 0;
  for (const Entry& entry : entries) {
    if (app.get_subcommand(entry.name)->parsed()) {
      return run_phase(args[i], entry.phase);
    }
    ++i;
  }
  std::cerr << "cxrlt: no subcommand\n";
  return 2;
}
