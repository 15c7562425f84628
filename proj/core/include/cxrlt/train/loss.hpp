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

#include <cstddef>
#include <vector>

#include "cxrlt/data/table.hpp"

namespace cxrlt::train {

struct MaskedBceResult {
  double loss = 0.0;            // mean BCE over known entries; 0 when none
  std::vector<float> dlogits;   // gradient w.r.t. logits; exactly 0 at Unknown
  size_t known = 0;             // number of known (i, j) entries
};

/// Sigmoid binary cross-entropy restricted to known annotations. The loss
/// is the mean over all (i, j) with annotation != Unknown of
/// BCE(sigmoid(logit_ij), y_ij); masked positions contribute nothing and
/// receive an exactly-zero gradient. Shapes: row-major batch x labels.
MaskedBceResult masked_bce(const std::vector<float>& logits,
                           const std::vector<data::AnnotationState>& annotations,
                           size_t batch, size_t label_count);

}  // namespace cxrlt::train
