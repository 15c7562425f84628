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

#include <cmath>
#include <cstring>
#include <random>

#include <doctest.h>

#include "cxrlt/train/loss.hpp"
#include "cxrlt/util/error.hpp"

using namespace cxrlt;
using data::AnnotationState;
using train::masked_bce;

TEST_SUITE("loss") {

TEST_CASE("hand-checked value: zero logit, positive truth") {
  std::vector<float> logits = {0.0f};
  std::vector<AnnotationState> ann = {AnnotationState::kPositive};
  auto r = masked_bce(logits, ann, 1, 1);
  CHECK(r.known == 1);
  CHECK(r.loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // d/dz = sigmoid(0) - 1 = -0.5, over one known entry.
  CHECK(r.dlogits[0] == doctest::Approx(-0.5f).epsilon(1e-6));
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 rng(3);
  const size_t batch = 4, labels = 6, total = batch * labels;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<float> logits(total);
    std::vector<AnnotationState> ann(total);
    for (size_t i = 0; i < total; ++i) {
      logits[i] = static_cast<float>((rng() % 2000) / 250.0 - 4.0);
      switch (rng() % 3) {
        case 0: ann[i] = AnnotationState::kPositive; break;
        case 1: ann[i] = AnnotationState::kNegative; break;
        default: ann[i] = AnnotationState::kUnknown; break;
      }
    }
    ann[0] = AnnotationState::kPositive;  // keep at least one known entry

    auto base = masked_bce(logits, ann, batch, labels);
    const float h = 1e-4f;
    for (size_t i = 0; i < total; ++i) {
      auto plus = logits;
      auto minus = logits;
      plus[i] += h;
      minus[i] -= h;
      // The float step is inexact, so divide by the step actually taken.
      const double step =
          static_cast<double>(plus[i]) - static_cast<double>(minus[i]);
      const double fd = (masked_bce(plus, ann, batch, labels).loss -
                         masked_bce(minus, ann, batch, labels).loss) /
                        step;
      const double g = base.dlogits[i];
      CHECK(std::abs(fd - g) <= 1e-5 * std::max(std::abs(g), 1e-6));
      if (ann[i] == AnnotationState::kUnknown) CHECK(g == 0.0);
    }
  }
}

TEST_CASE("loss is bit-exact under Unknown-logit perturbation") {
  std::vector<float> logits = {0.3f, -2.0f, 1.5f, 0.0f};
  std::vector<AnnotationState> ann = {
      AnnotationState::kPositive, AnnotationState::kUnknown,
      AnnotationState::kNegative, AnnotationState::kUnknown};
  auto a = masked_bce(logits, ann, 2, 2);

  logits[1] = 123.0f;
  logits[3] = -77.5f;
  auto b = masked_bce(logits, ann, 2, 2);

  CHECK(std::memcmp(&a.loss, &b.loss, sizeof(double)) == 0);
  CHECK(a.dlogits[0] == b.dlogits[0]);
  CHECK(a.dlogits[2] == b.dlogits[2]);
  CHECK(b.dlogits[1] == 0.0f);
  CHECK(b.dlogits[3] == 0.0f);
}

TEST_CASE("all-Unknown batch contributes nothing") {
  std::vector<float> logits = {5.0f, -5.0f};
  std::vector<AnnotationState> ann = {AnnotationState::kUnknown,
                                      AnnotationState::kUnknown};
  auto r = masked_bce(logits, ann, 1, 2);
  CHECK(r.loss == 0.0);
  CHECK(r.known == 0);
  for (float g : r.dlogits) CHECK(g == 0.0f);
}

TEST_CASE("shape mismatch is rejected") {
  std::vector<float> logits = {0.0f};
  std::vector<AnnotationState> ann = {AnnotationState::kPositive};
  CHECK_THROWS_AS(masked_bce(logits, ann, 2, 1), ContractError);
}

TEST_CASE("extreme logits stay finite") {
  std::vector<float> logits = {80.0f, -80.0f};
  std::vector<AnnotationState> ann = {AnnotationState::kNegative,
                                      AnnotationState::kPositive};
  auto r = masked_bce(logits, ann, 1, 2);
  CHECK(std::isfinite(r.loss));
  CHECK(r.loss == doctest::Approx(80.0).epsilon(1e-9));
}

}  // TEST_SUITE
