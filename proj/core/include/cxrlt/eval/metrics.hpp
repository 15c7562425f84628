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

#include <optional>
#include <vector>

namespace cxrlt::eval {

/// Non-interpolated Average Precision. Items are ranked by score
/// descending with ascending-original-index tie-break; AP is the mean of
/// precision@k over the ranks k holding a positive. Returns nullopt when
/// there are no positives.
std::optional<double> average_precision(const std::vector<double>& scores,
                                        const std::vector<int>& truths);

/// Independent test oracle. Enumerates every threshold (one per item, in
/// the same score-then-index order) and integrates the precision-recall
/// step function by pairwise rank counting; shares no code path with
/// average_precision beyond the tie-break rule.
std::optional<double> ap_bruteforce_oracle(const std::vector<double>& scores,
                                           const std::vector<int>& truths);

}  // namespace cxrlt::eval
