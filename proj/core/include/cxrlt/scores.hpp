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

#include <string>
#include <vector>

namespace cxrlt {

/// N x L matrix of per-sample per-label probabilities in [0,1]. Columns
/// are bound to a registry's label order via `labels` / `registry_ref`;
/// rows keep the producing table's record order via `image_refs`.
struct ScoreMatrix {
  std::vector<std::string> labels;
  std::vector<std::string> image_refs;
  std::string registry_ref;
  std::vector<double> values;  // row-major, rows() x labels.size()

  size_t rows() const { return image_refs.size(); }
  size_t cols() const { return labels.size(); }

  double at(size_t row, size_t col) const {
    return values[row * cols() + col];
  }
  double& at(size_t row, size_t col) { return values[row * cols() + col]; }
};

/// CSV persistence: header `image_ref,<label_1>,...,<label_L>`, one row per
/// record, values printed with round-trip precision.
void save_scores(const ScoreMatrix& scores, const std::string& path);
ScoreMatrix load_scores(const std::string& path);

}  // namespace cxrlt
