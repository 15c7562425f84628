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

#include "cxrlt/eval/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "cxrlt/util/error.hpp"

namespace cxrlt::eval {

namespace {

void check_inputs(const std::vector<double>& scores,
                  const std::vector<int>& truths) {
  if (scores.size() != truths.size()) {
    throw ContractError("average_precision: scores/truths length mismatch");
  }
  for (int t : truths) {
    if (t != 0 && t != 1) {
      throw ContractError("average_precision: truths must be binary");
    }
  }
}

}  // namespace

std::optional<double> average_precision(const std::vector<double>& scores,
                                        const std::vector<int>& truths) {
  check_inputs(scores, truths);
  const size_t n = scores.size();
  size_t positives = 0;
  for (int t : truths) positives += t;
  if (positives == 0) return std::nullopt;

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });

  double sum_precision = 0.0;
  size_t hits = 0;
  for (size_t rank = 0; rank < n; ++rank) {
    if (truths[order[rank]] == 1) {
      ++hits;
      sum_precision += static_cast<double>(hits) / static_cast<double>(rank + 1);
    }
  }
  return sum_precision / static_cast<double>(positives);
}

std::optional<double> ap_bruteforce_oracle(const std::vector<double>& scores,
                                           const std::vector<int>& truths) {
  check_inputs(scores, truths);
  const size_t n = scores.size();
  size_t positives = 0;
  for (int t : truths) positives += t;
  if (positives == 0) return std::nullopt;

  // Each item i defines a threshold cutting the ranking just below it.
  // ranked_above(j, i): item j is retrieved at i's threshold.
  auto ranked_at_or_above = [&](size_t j, size_t i) {
    if (j == i) return true;
    if (scores[j] != scores[i]) return scores[j] > scores[i];
    return j < i;  // tie-break: ascending original index
  };

  // Walk the precision-recall step function: recall increases by 1/P at
  // thresholds cutting at a positive item; accumulate precision there.
  double area = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (truths[i] != 1) continue;
    size_t retrieved = 0;
    size_t true_pos = 0;
    for (size_t j = 0; j < n; ++j) {
      if (ranked_at_or_above(j, i)) {
        ++retrieved;
        if (truths[j] == 1) ++true_pos;
      }
    }
    const double precision =
        static_cast<double>(true_pos) / static_cast<double>(retrieved);
    const double recall_increment = 1.0 / static_cast<double>(positives);
    area += precision * recall_increment;
  }
  return area;
}

}  // namespace cxrlt::eval
