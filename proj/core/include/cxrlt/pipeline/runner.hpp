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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cxrlt/data/table.hpp"
#include "cxrlt/labels/registry.hpp"
#include "cxrlt/pipeline/config.hpp"
#include "cxrlt/train/stage.hpp"

namespace cxrlt::pipeline {

/// Pipeline phases in execution order. Each phase reads the artifacts of
/// earlier phases from the run directory, so phases can run in separate
/// processes.
enum class Phase {
  kIngest,
  kSplit,
  kTrain,
  kPredict,
  kEnsemble,
  kEvaluate,
  kReport,
  kPrompts,
};

std::string phase_name(Phase phase);

struct RunOptions {
  std::string out_dir;                // empty: stamped dir under config.out_dir
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::string stage;                  // train phase: run only this stage
};

/// Fresh directory `<base>/run-<utc-stamp>-<n>`; `n` disambiguates
/// collisions, so a completed run is never overwritten.
std::string make_run_dir(const std::string& base);

/// Executes pipeline phases against one run directory. Artifacts are
/// written under run_dir(); see docs/file-formats.md for the layout.
class PipelineRunner {
 public:
  PipelineRunner(PipelineConfig config, RunOptions options = {});

  const std::string& run_dir() const { return run_dir_; }
  const PipelineConfig& config() const { return config_; }

  void run(Phase phase);

  /// Composite run: every phase in order (prompts only when configured).
  /// Creates an INCOMPLETE marker first and removes it on success; a phase
  /// failure leaves the marker and partial artifacts in place and rethrows
  /// with the failing phase named.
  void run_all();

  // Artifact access, loading from the run directory on demand. Each throws
  // ContractError when the producing phase has not run.
  const labels::LabelRegistry& registry();
  const data::DatasetTable& table(const std::string& dataset);
  const data::SplitAssignment& split(const std::string& name);
  const labels::CategoryMap& category_map();

  /// Materializes the table behind a "<split>/<subsplit>" reference.
  /// Synthetic mixing applies to the first subsplit of the split holding
  /// the mix target.
  data::DatasetTable resolve_table(const std::string& ref);

 private:
  void run_ingest();
  void run_split();
  void run_train();
  void run_predict();
  void run_ensemble();
  void run_evaluate();
  void run_report();
  void run_prompts();

  const data::DatasetTable& merged_table(const std::string& split_name);
  std::vector<std::string> score_members() const;
  std::uint64_t effective_seed() const;

  PipelineConfig config_;
  RunOptions options_;
  std::string run_dir_;

  std::optional<labels::LabelRegistry> registry_;
  std::map<std::string, data::DatasetTable> tables_;
  std::map<std::string, data::DatasetTable> merged_;
  std::map<std::string, data::SplitAssignment> splits_;
  std::optional<labels::CategoryMap> category_map_;
  train::ImageCache cache_;
};

}  // namespace cxrlt::pipeline
