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

#include "cxrlt/train/schedule.hpp"

#include <cmath>

#include "cxrlt/util/error.hpp"

namespace cxrlt::train {

void StageConfig::validate() const {
  if (name.empty()) throw ConfigError("stage config: empty name");
  if (epochs <= 0) throw ConfigError("stage " + name + ": epochs must be > 0");
  if (batch_size <= 0) {
    throw ConfigError("stage " + name + ": batch_size must be > 0");
  }
  if (base_lr <= 0) throw ConfigError("stage " + name + ": base_lr must be > 0");
  if (decay_every <= 0) {
    throw ConfigError("stage " + name + ": decay_every must be > 0");
  }
  if (!(decay_factor > 0 && decay_factor < 1)) {
    throw ConfigError("stage " + name + ": decay_factor must be in (0,1)");
  }
}

double lr_at(const StageConfig& config, int epoch) {
  if (epoch < 0 || epoch >= config.epochs) {
    throw ContractError("lr_at: epoch " + std::to_string(epoch) +
                        " outside [0, " + std::to_string(config.epochs) + ")");
  }
  const int steps = epoch / config.decay_every;
  return config.base_lr * std::pow(config.decay_factor, steps);
}

}  // namespace cxrlt::train
