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

#include "cxrlt/train/stage.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "cxrlt/eval/metrics.hpp"
#include "cxrlt/train/adam.hpp"
#include "cxrlt/train/loss.hpp"
#include "cxrlt/util/csv.hpp"
#include "cxrlt/util/error.hpp"

namespace cxrlt::train {

const data::ImageArray& ImageCache::get(const data::SampleRecord& record,
                                        int side,
                                        const data::NormalizationSpec& norm) {
  const std::string key = record.image_ref + "#" + std::to_string(side);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_.emplace(key, data::load_image(record, side, norm)).first;
  }
  return it->second;
}

void save_history(const std::vector<EpochStats>& history,
                  const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"epoch", "train_loss", "val_map", "lr"});
  char buf[40];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& e : history) {
    rows.push_back({std::to_string(e.epoch), fmt(e.train_loss), fmt(e.val_map),
                    fmt(e.lr)});
  }
  csv::write_file(path, rows);
}

std::vector<EpochStats> load_history(const std::string& path) {
  auto rows = csv::read_file(path);
  if (rows.empty() ||
      rows[0] != std::vector<std::string>{"epoch", "train_loss", "val_map", "lr"}) {
    throw SchemaError("history CSV " + path + ": bad header");
  }
  std::vector<EpochStats> history;
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 4) {
      throw SchemaError("history CSV " + path + ": bad row width");
    }
    EpochStats e;
    e.epoch = std::stoi(rows[r][0]);
    e.train_loss = std::stod(rows[r][1]);
    e.val_map = std::stod(rows[r][2]);
    e.lr = std::stod(rows[r][3]);
    history.push_back(e);
  }
  return history;
}

ScoreMatrix predict(Model& model, const data::DatasetTable& table,
                    const labels::LabelRegistry& registry,
                    const data::NormalizationSpec& norm, int batch_size,
                    ImageCache* cache) {
  if (model.label_count() != registry.size()) {
    throw ContractError("predict: model width does not match registry size");
  }
  if (batch_size <= 0) throw ContractError("predict: batch_size must be > 0");

  ScoreMatrix out;
  out.labels = registry.labels();
  out.registry_ref = registry.fingerprint();
  out.values.reserve(table.records.size() * registry.size());

  ImageCache local;
  ImageCache& images = cache ? *cache : local;
  const int side = model.input_side();
  const int L = registry.size();
  for (size_t start = 0; start < table.records.size(); start += batch_size) {
    const size_t end = std::min(table.records.size(),
                                start + static_cast<size_t>(batch_size));
    std::vector<data::ImageArray> batch;
    batch.reserve(end - start);
    for (size_t i = start; i < end; ++i) {
      batch.push_back(images.get(table.records[i], side, norm));
    }
    std::vector<float> logits = model.forward(batch);
    for (size_t i = start; i < end; ++i) {
      out.image_refs.push_back(table.records[i].image_ref);
      for (int l = 0; l < L; ++l) {
        const double z = logits[(i - start) * L + l];
        out.values.push_back(1.0 / (1.0 + std::exp(-z)));
      }
    }
  }
  return out;
}

double macro_map(const ScoreMatrix& scores, const data::DatasetTable& table) {
  if (scores.rows() != table.records.size()) {
    throw ContractError("macro_map: row count mismatch");
  }
  const size_t L = scores.cols();
  double sum = 0.0;
  size_t defined = 0;
  for (size_t j = 0; j < L; ++j) {
    std::vector<double> col_scores;
    std::vector<int> col_truths;
    for (size_t r = 0; r < table.records.size(); ++r) {
      auto a = table.records[r].annotations.at(j);
      if (a == data::AnnotationState::kUnknown) continue;
      col_scores.push_back(scores.at(r, j));
      col_truths.push_back(a == data::AnnotationState::kPositive ? 1 : 0);
    }
    auto ap = eval::average_precision(col_scores, col_truths);
    if (ap) {
      sum += *ap;
      ++defined;
    }
  }
  return defined ? sum / static_cast<double>(defined) : 0.0;
}

StageResult run_stage(const StageConfig& config, Model& model,
                      const data::DatasetTable& train_table,
                      const data::DatasetTable& val_table,
                      const labels::LabelRegistry& registry,
                      const std::vector<std::string>& parent_chain,
                      const data::NormalizationSpec& norm, ImageCache* cache,
                      const std::string& divergence_dump_dir) {
  config.validate();
  if (model.label_count() != registry.size()) {
    throw ContractError("run_stage: model width does not match registry size");
  }
  const int L = registry.size();
  const int side = model.input_side();

  std::vector<std::string> chain = parent_chain;
  chain.push_back(config.name);

  ImageCache local;
  ImageCache& images = cache ? *cache : local;

  Adam optimizer;
  StageResult result;
  double best_map = -1.0;

  std::vector<size_t> order(train_table.records.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = lr_at(config, epoch);

    // Seeded shuffle; the batch order is a pure function of (seed, epoch).
    std::mt19937_64 rng(config.seed * 0x9e3779b97f4a7c15ull +
                        static_cast<std::uint64_t>(epoch));
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }

    double loss_sum = 0.0;
    size_t batches = 0;
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(config.batch_size)) {
      const size_t end = std::min(
          order.size(), start + static_cast<size_t>(config.batch_size));
      std::vector<data::ImageArray> batch;
      std::vector<data::AnnotationState> annotations;
      batch.reserve(end - start);
      annotations.reserve((end - start) * L);
      for (size_t k = start; k < end; ++k) {
        const auto& rec = train_table.records[order[k]];
        batch.push_back(images.get(rec, side, norm));
        annotations.insert(annotations.end(), rec.annotations.begin(),
                           rec.annotations.end());
      }
      std::vector<float> logits = model.forward(batch);
      MaskedBceResult bce =
          masked_bce(logits, annotations, batch.size(), static_cast<size_t>(L));
      if (!std::isfinite(bce.loss)) {
        if (!divergence_dump_dir.empty()) {
          Checkpoint::from_model(model, chain, epoch, best_map, config.seed)
              .save(divergence_dump_dir);
        }
        throw DivergenceError("run_stage: non-finite loss in stage " +
                              config.name + " at epoch " +
                              std::to_string(epoch));
      }
      loss_sum += bce.loss;
      ++batches;
      if (bce.known > 0) {
        model.zero_grad();
        model.backward(bce.dlogits);
        optimizer.step(model.parameters(), lr);
      }
    }

    ScoreMatrix val_scores = predict(model, val_table, registry, norm,
                                     config.batch_size, &images);
    const double val_map = macro_map(val_scores, val_table);

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = batches ? loss_sum / static_cast<double>(batches) : 0.0;
    stats.val_map = val_map;
    stats.lr = lr;
    result.history.push_back(stats);

    if (val_map > best_map) {
      best_map = val_map;
      result.checkpoint =
          Checkpoint::from_model(model, chain, epoch, val_map, config.seed);
    }
  }
  return result;
}

}  // namespace cxrlt::train
