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

#include "cxrlt/train/adam.hpp"

#include <cmath>

#include "cxrlt/util/error.hpp"

namespace cxrlt::train {

Adam::Adam(double beta1, double beta2, double eps)
    : beta1_(beta1), beta2_(beta2), eps_(eps) {}

void Adam::step(const std::vector<NamedTensor*>& params, double lr) {
  if (lr <= 0) throw ContractError("Adam::step: lr must be positive");
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, t_);
  const double bc2 = 1.0 - std::pow(beta2_, t_);
  for (NamedTensor* p : params) {
    State& s = state_[p->name];
    if (s.m.empty()) {
      s.m.assign(p->size(), 0.0);
      s.v.assign(p->size(), 0.0);
    }
    for (size_t i = 0; i < p->size(); ++i) {
      const double g = p->grad[i];
      s.m[i] = beta1_ * s.m[i] + (1.0 - beta1_) * g;
      s.v[i] = beta2_ * s.v[i] + (1.0 - beta2_) * g * g;
      const double m_hat = s.m[i] / bc1;
      const double v_hat = s.v[i] / bc2;
      const double update = lr * m_hat / (std::sqrt(v_hat) + eps_);
      if (update != 0.0) {
        p->value[i] = static_cast<float>(p->value[i] - update);
      }
    }
  }
}

}  // namespace cxrlt::train
