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

#include <cstdint>
#include <string>

namespace cxrlt::train {

/// Declarative description of one training stage. Table and init
/// references are resolved by the pipeline layer; the engine receives
/// materialized tables alongside this config.
struct StageConfig {
  std::string name;
  int epochs = 20;
  double base_lr = 1e-4;
  int decay_every = 5;
  double decay_factor = 0.5;
  int batch_size = 16;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Step-decay schedule: base_lr * decay_factor^floor(epoch / decay_every).
/// Throws ContractError when epoch is outside [0, epochs).
double lr_at(const StageConfig& config, int epoch);

}  // namespace cxrlt::train
