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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "cxrlt/ensemble/average.hpp"
#include "cxrlt/eval/metrics.hpp"
#include "cxrlt/train/loss.hpp"
#include "cxrlt/train/model.hpp"

namespace {

using namespace cxrlt;

void BM_AveragePrecision(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::vector<double> scores(n);
  std::vector<int> truths(n);
  for (size_t i = 0; i < n; ++i) {
    scores[i] = static_cast<double>(rng() % 1000000) / 1000000.0;
    truths[i] = rng() % 10 == 0 ? 1 : 0;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval::average_precision(scores, truths));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_AveragePrecision)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_MaskedBce(benchmark::State& state) {
  const size_t batch = 16;
  const size_t labels = static_cast<size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::vector<float> logits(batch * labels);
  std::vector<data::AnnotationState> ann(batch * labels);
  for (size_t i = 0; i < logits.size(); ++i) {
    logits[i] = static_cast<float>((rng() % 2000) / 250.0 - 4.0);
    ann[i] = static_cast<data::AnnotationState>(rng() % 3);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(train::masked_bce(logits, ann, batch, labels));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(batch * labels));
}
BENCHMARK(BM_MaskedBce)->Arg(26)->Arg(256);

void BM_TinyCnnForward(benchmark::State& state) {
  train::ModelSpec spec;
  spec.type = "tiny_cnn";
  spec.input_side = static_cast<int>(state.range(0));
  spec.channels = 8;
  spec.hidden = 32;
  spec.labels = 26;
  auto model = train::make_model(spec);
  train::init_random(*model, 3);

  std::mt19937_64 rng(4);
  std::vector<data::ImageArray> batch(8);
  for (auto& img : batch) {
    img.side = spec.input_side;
    img.values.resize(3 * spec.input_side * spec.input_side);
    for (auto& v : img.values) {
      v = static_cast<float>((rng() % 1000) / 500.0 - 1.0);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(model->forward(batch));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(batch.size()));
}
BENCHMARK(BM_TinyCnnForward)->Arg(32)->Arg(64);

void BM_AverageScores(benchmark::State& state) {
  const size_t rows = static_cast<size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::vector<ScoreMatrix> members(4);
  for (auto& m : members) {
    m.labels.assign(26, "");
    for (size_t c = 0; c < 26; ++c) m.labels[c] = "L" + std::to_string(c);
    m.registry_ref = "benchref00000000";
    m.image_refs.resize(rows);
    for (size_t r = 0; r < rows; ++r) m.image_refs[r] = std::to_string(r);
    m.values.resize(rows * 26);
    for (auto& v : m.values) {
      v = static_cast<double>(rng() % 10001) / 10000.0;
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(ensemble::average_scores(members));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(rows * 26));
}
BENCHMARK(BM_AverageScores)->Arg(1000)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
