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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cxrlt/data/image.hpp"
#include "cxrlt/data/prompts.hpp"
#include "cxrlt/labels/registry.hpp"
#include "cxrlt/train/model.hpp"
#include "cxrlt/train/schedule.hpp"

namespace cxrlt::pipeline {

/// One source dataset. `manifest` is resolved relative to the config file.
struct DatasetConfig {
  std::string name;
  std::string manifest;
  bool synthetic = false;
};

/// Which dataset and which table the run is about. `train` and `test` are
/// split references of the form "<split>/<subsplit>"; train-split positive
/// counts drive the Head/Medium/Tail assignment with the two thresholds.
struct EvalConfig {
  std::string dataset;
  std::string train;
  std::string test;
  std::int64_t head_min = 30000;
  std::int64_t medium_min = 10000;
};

/// A patient-level split over the merged tables of `datasets`.
struct SplitConfig {
  std::string name;
  std::vector<std::string> datasets;
  std::vector<std::pair<std::string, double>> ratios;
  std::optional<std::uint64_t> seed;  // default: pipeline seed
};

/// Synthetic records of `dataset` are appended to `into` before splitting.
struct MixConfig {
  std::string into;
  std::string dataset;
};

/// One training stage. `train` / `val` are split references; `init` is
/// "random", "stage:<name>" (checkpoint of an earlier stage) or
/// "generalist:<path>" (external checkpoint directory).
struct StageSpec {
  std::string name;
  std::string train;
  std::string val;
  std::string init = "random";
  int epochs = 20;
  double base_lr = 1e-4;
  int decay_every = 5;
  double decay_factor = 0.5;
  int batch_size = 16;
  std::optional<std::uint64_t> seed;  // default: pipeline seed

  train::StageConfig engine_config(std::uint64_t default_seed) const;
};

/// Score-averaging over the listed stages' score files.
struct EnsembleConfig {
  std::vector<std::string> members;
  std::vector<double> weights;  // empty: uniform
};

/// Category-delta plot between two evaluated score sets.
struct DeltaConfig {
  std::string base;
  std::string variant;
};

struct PromptsConfig {
  size_t count = 0;
  std::optional<std::uint64_t> seed;
  std::vector<data::PromptTemplate> templates;
  std::map<std::string, std::string> phrases;
};

/// Fully parsed run configuration. Parsing is strict: unknown keys and
/// type mismatches raise ConfigError naming the offending key.
struct PipelineConfig {
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  labels::AliasTable aliases;
  std::vector<DatasetConfig> datasets;
  EvalConfig eval;
  std::vector<SplitConfig> splits;
  train::ModelSpec model;  // `labels` is filled from the registry at run time
  data::NormalizationSpec normalization;
  std::optional<MixConfig> mix_synthetic;
  std::vector<StageSpec> stages;
  std::optional<EnsembleConfig> ensemble;
  std::optional<DeltaConfig> delta;
  std::optional<PromptsConfig> prompts;
  std::string base_dir = ".";  // directory the manifests resolve against

  const DatasetConfig& dataset(const std::string& name) const;
  const SplitConfig& split(const std::string& name) const;
  const StageSpec& stage(const std::string& name) const;

  /// Cross-reference checks (split refs, stage init order, eval refs).
  void validate() const;

  /// JSON document with every effective value spelled out.
  std::string resolved_json() const;
};

/// Split reference "<split>/<subsplit>".
struct SplitRef {
  std::string split;
  std::string subsplit;
};
SplitRef parse_split_ref(const std::string& ref);

PipelineConfig parse_config(const std::string& text,
                            const std::string& base_dir = ".");
PipelineConfig load_config(const std::string& path);

}  // namespace cxrlt::pipeline
