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

#include "cxrlt/train/loss.hpp"

#include <cmath>

#include "cxrlt/util/error.hpp"

namespace cxrlt::train {

MaskedBceResult masked_bce(const std::vector<float>& logits,
                           const std::vector<data::AnnotationState>& annotations,
                           size_t batch, size_t label_count) {
  const size_t total = batch * label_count;
  if (logits.size() != total || annotations.size() != total) {
    throw ContractError("masked_bce: logits/annotations shape mismatch");
  }

  MaskedBceResult result;
  result.dlogits.assign(total, 0.0f);

  double loss_sum = 0.0;
  for (size_t i = 0; i < total; ++i) {
    const auto a = annotations[i];
    if (a == data::AnnotationState::kUnknown) continue;
    const double z = logits[i];
    const double y = a == data::AnnotationState::kPositive ? 1.0 : 0.0;
    // Stable formulation: max(z,0) - z*y + log(1 + exp(-|z|)).
    loss_sum += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
    const double sigma = 1.0 / (1.0 + std::exp(-z));
    result.dlogits[i] = static_cast<float>(sigma - y);
    ++result.known;
  }
  if (result.known == 0) return result;  // loss 0, gradient 0

  const double inv_known = 1.0 / static_cast<double>(result.known);
  result.loss = loss_sum * inv_known;
  for (size_t i = 0; i < total; ++i) {
    result.dlogits[i] = static_cast<float>(result.dlogits[i] * inv_known);
  }
  return result;
}

}  // namespace cxrlt::train
