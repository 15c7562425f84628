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
#include <string>
#include <vector>

#include "cxrlt/data/image.hpp"
#include "cxrlt/data/table.hpp"
#include "cxrlt/labels/registry.hpp"
#include "cxrlt/scores.hpp"
#include "cxrlt/train/model.hpp"
#include "cxrlt/train/schedule.hpp"

namespace cxrlt::train {

/// Keyed by (image_ref, side); loads at most once per key. Not thread-safe.
class ImageCache {
 public:
  const data::ImageArray& get(const data::SampleRecord& record, int side,
                              const data::NormalizationSpec& norm);
  void clear() { cache_.clear(); }

 private:
  std::map<std::string, data::ImageArray> cache_;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_map = 0.0;
  double lr = 0.0;
};

struct StageResult {
  Checkpoint checkpoint;  // best validation mAP over epochs
  std::vector<EpochStats> history;
};

/// History CSV `epoch,train_loss,val_map,lr`.
void save_history(const std::vector<EpochStats>& history,
                  const std::string& path);
std::vector<EpochStats> load_history(const std::string& path);

/// Sigmoid scores per record in table order. Inference only; deterministic
/// given model and table. An image failure aborts the whole call.
ScoreMatrix predict(Model& model, const data::DatasetTable& table,
                    const labels::LabelRegistry& registry,
                    const data::NormalizationSpec& norm = {},
                    int batch_size = 16, ImageCache* cache = nullptr);

/// Macro mAP over labels with defined AP; 0 when none is defined.
double macro_map(const ScoreMatrix& scores, const data::DatasetTable& table);

/// Runs one training stage: seeded shuffling, mini-batch Adam with the
/// step-decay schedule and masked BCE, per-epoch validation mAP. Returns
/// the checkpoint with the best validation mAP plus the full history. The
/// model must already be initialized; `parent_chain` is the provenance of
/// that initialization. On divergence (non-finite loss) the last finite
/// parameters are saved under `divergence_dump_dir` (when non-empty) and
/// DivergenceError is raised.
StageResult run_stage(const StageConfig& config, Model& model,
                      const data::DatasetTable& train_table,
                      const data::DatasetTable& val_table,
                      const labels::LabelRegistry& registry,
                      const std::vector<std::string>& parent_chain,
                      const data::NormalizationSpec& norm = {},
                      ImageCache* cache = nullptr,
                      const std::string& divergence_dump_dir = {});

}  // namespace cxrlt::train
