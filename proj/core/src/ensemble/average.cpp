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

#include "cxrlt/ensemble/average.hpp"

#include "cxrlt/util/error.hpp"

namespace cxrlt::ensemble {

ScoreMatrix average_scores(const std::vector<ScoreMatrix>& matrices,
                           const std::vector<double>& weights) {
  if (matrices.empty()) {
    throw ContractError("average_scores: ensemble needs at least one member");
  }
  const ScoreMatrix& first = matrices.front();
  for (const auto& m : matrices) {
    if (m.rows() != first.rows() || m.cols() != first.cols()) {
      throw IncompatibilityError("average_scores: member shape mismatch");
    }
    if (m.labels != first.labels || m.registry_ref != first.registry_ref) {
      throw IncompatibilityError("average_scores: member registry mismatch");
    }
    if (m.image_refs != first.image_refs) {
      throw IncompatibilityError("average_scores: member row order mismatch");
    }
  }

  std::vector<double> w = weights;
  if (w.empty()) w.assign(matrices.size(), 1.0);
  if (w.size() != matrices.size()) {
    throw ContractError("average_scores: weight count does not match members");
  }
  double total = 0.0;
  for (double x : w) {
    if (x <= 0.0) throw ContractError("average_scores: weights must be positive");
    total += x;
  }
  for (double& x : w) x /= total;

  if (matrices.size() == 1) return first;  // singleton identity, exact

  ScoreMatrix out = first;
  for (size_t i = 0; i < out.values.size(); ++i) {
    double acc = 0.0;
    for (size_t m = 0; m < matrices.size(); ++m) {
      acc += w[m] * matrices[m].values[i];
    }
    out.values[i] = acc;
  }
  return out;
}

}  // namespace cxrlt::ensemble
