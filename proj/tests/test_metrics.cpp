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
#include <random>

#include <doctest.h>

#include "cxrlt/eval/metrics.hpp"
#include "cxrlt/util/error.hpp"

using namespace cxrlt;
using eval::ap_bruteforce_oracle;
using eval::average_precision;

TEST_SUITE("metrics") {

TEST_CASE("perfect ranking scores 1") {
  auto ap = average_precision({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0});
  REQUIRE(ap.has_value());
  CHECK(*ap == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("single positive at rank 4 scores 0.25") {
  auto ap = average_precision({0.9, 0.8, 0.7, 0.6}, {0, 0, 0, 1});
  REQUIRE(ap.has_value());
  CHECK(*ap == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("hand-checked mixed ranking") {
  // Ranked: pos, neg, pos, neg -> (1/1 + 2/3) / 2 = 5/6.
  auto ap = average_precision({0.9, 0.8, 0.7, 0.6}, {1, 0, 1, 0});
  REQUIRE(ap.has_value());
  CHECK(*ap == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("ties break by ascending original index") {
  // Both items score 0.5; index 0 ranks first.
  auto pos_first = average_precision({0.5, 0.5}, {1, 0});
  auto pos_second = average_precision({0.5, 0.5}, {0, 1});
  REQUIRE(pos_first.has_value());
  REQUIRE(pos_second.has_value());
  CHECK(*pos_first == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*pos_second == doctest::Approx(0.5).epsilon(1e-15));
  // The oracle shares exactly this rule.
  CHECK(*ap_bruteforce_oracle({0.5, 0.5}, {1, 0}) == *pos_first);
  CHECK(*ap_bruteforce_oracle({0.5, 0.5}, {0, 1}) == *pos_second);
}

TEST_CASE("degenerate and invalid inputs") {
  CHECK_FALSE(average_precision({0.3, 0.1}, {0, 0}).has_value());
  CHECK_FALSE(average_precision({}, {}).has_value());
  CHECK_FALSE(ap_bruteforce_oracle({0.3}, {0}).has_value());
  CHECK_THROWS_AS(average_precision({0.5}, {1, 0}), ContractError);
  CHECK_THROWS_AS(average_precision({0.5}, {2}), ContractError);
  CHECK_THROWS_AS(ap_bruteforce_oracle({0.5}, {1, 0}), ContractError);
  CHECK_THROWS_AS(ap_bruteforce_oracle({0.5}, {-1}), ContractError);
}

TEST_CASE("AP is invariant under monotone score maps") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t n = 2 + rng() % 30;
    std::vector<double> scores(n);
    std::vector<int> truths(n);
    for (size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % 100000) / 100000.0;
      truths[i] = rng() % 3 == 0 ? 1 : 0;
    }
    std::vector<double> mapped(n);
    for (size_t i = 0; i < n; ++i) {
      mapped[i] = 3.0 * scores[i] + std::exp(scores[i]);  // strictly increasing
    }
    auto a = average_precision(scores, truths);
    auto b = average_precision(mapped, truths);
    CHECK(a.has_value() == b.has_value());
    if (a) CHECK(*a == doctest::Approx(*b).epsilon(1e-12));
  }
}

TEST_CASE("exhaustive agreement with the oracle at small n") {
  std::mt19937_64 rng(23);
  for (size_t n = 1; n <= 8; ++n) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::vector<int> truths(n);
      for (size_t i = 0; i < n; ++i) truths[i] = (mask >> i) & 1;
      std::vector<double> scores(n);
      for (size_t i = 0; i < n; ++i) {
        scores[i] = static_cast<double>(rng() % 1000000) / 1000000.0;
      }
      auto a = average_precision(scores, truths);
      auto b = ap_bruteforce_oracle(scores, truths);
      REQUIRE(a.has_value() == b.has_value());
      if (a) CHECK(std::abs(*a - *b) <= 1e-12);
    }
  }
}

TEST_CASE("oracle agreement with heavy ties") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 3 + rng() % 12;
    std::vector<double> scores(n);
    std::vector<int> truths(n);
    for (size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % 4) / 4.0;  // many duplicates
      truths[i] = rng() % 2;
    }
    auto a = average_precision(scores, truths);
    auto b = ap_bruteforce_oracle(scores, truths);
    REQUIRE(a.has_value() == b.has_value());
    if (a) CHECK(std::abs(*a - *b) <= 1e-12);
  }
}

}  // TEST_SUITE
