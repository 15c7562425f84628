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

#include <vector>

#include "cxrlt/scores.hpp"

namespace cxrlt::ensemble {

/// Element-wise weighted mean of probability matrices. All members must
/// share shape and registry binding. Weights default to uniform and are
/// normalized to sum to 1; they must be positive. Averaging happens in
/// probability space (post-sigmoid), never on logits.
ScoreMatrix average_scores(const std::vector<ScoreMatrix>& matrices,
                           const std::vector<double>& weights = {});

}  // namespace cxrlt::ensemble
