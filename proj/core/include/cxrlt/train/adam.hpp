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

#include <map>
#include <string>
#include <vector>

#include "cxrlt/train/model.hpp"

namespace cxrlt::train {

/// Adam with bias correction and no weight decay. Defaults: beta1 0.9,
/// beta2 0.999, eps 1e-8. A parameter with an all-zero gradient stream is
/// left bit-unchanged.
class Adam {
 public:
  explicit Adam(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  /// One update over the parameters' accumulated gradients.
  void step(const std::vector<NamedTensor*>& params, double lr);

 private:
  struct State {
    std::vector<double> m;
    std::vector<double> v;
  };
  double beta1_, beta2_, eps_;
  long t_ = 0;
  std::map<std::string, State> state_;
};

}  // namespace cxrlt::train
