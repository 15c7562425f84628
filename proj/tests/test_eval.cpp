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
#include <optional>
#include <random>

#include <doctest.h>

#include "cxrlt/eval/report.hpp"
#include "cxrlt/util/error.hpp"
#include "support/published_results.hpp"
#include "support/temp_dir.hpp"

using namespace cxrlt;
using data::AnnotationState;

namespace {

struct Fixture {
  labels::LabelRegistry registry;
  labels::CategoryMap category_map;
};

// Four labels: A Head, B Medium, C and D Tail with D tail-unique.
Fixture small_fixture() {
  Fixture f;
  labels::DatasetDescriptor d;
  d.name = "target";
  d.labels = {"A", "B", "C", "D"};
  d.positive_counts = {40000, 20000, 500, 100};
  f.registry = labels::build_registry({d});
  f.category_map = labels::categorize(f.registry, "target", {});
  f.category_map.tail_unique = {3};
  return f;
}

// Registry and category map matching the published 26-label benchmark.
Fixture published_fixture() {
  Fixture f;
  labels::DatasetDescriptor d;
  d.name = "target";
  d.labels.assign(testsupport::kPublishedLabelNames.begin(),
                  testsupport::kPublishedLabelNames.end());
  for (int i = 0; i < testsupport::kPublishedLabels; ++i) {
    if (i < testsupport::kPublishedHead) {
      d.positive_counts.push_back(40000);
    } else if (i < testsupport::kPublishedHead + testsupport::kPublishedMedium) {
      d.positive_counts.push_back(15000);
    } else {
      d.positive_counts.push_back(500);
    }
  }
  f.registry = labels::build_registry({d});
  f.category_map = labels::categorize(f.registry, "target", {});
  for (int i = testsupport::kPublishedLabels - testsupport::kPublishedTailU;
       i < testsupport::kPublishedLabels; ++i) {
    f.category_map.tail_unique.insert(i);
  }
  return f;
}

data::DatasetTable small_table(const Fixture& f) {
  // Rows with distinct annotation patterns over labels A..D.
  data::DatasetTable table;
  table.registry_ref = f.registry.fingerprint();
  auto add = [&](const std::string& ref,
                 std::vector<AnnotationState> ann) {
    data::SampleRecord rec;
    rec.image_ref = ref;
    rec.patient_id = "p" + ref;
    rec.dataset = "target";
    rec.annotations = std::move(ann);
    table.records.push_back(std::move(rec));
  };
  const auto P = AnnotationState::kPositive;
  const auto N = AnnotationState::kNegative;
  const auto U = AnnotationState::kUnknown;
  add("r0", {P, N, U, N});
  add("r1", {N, P, P, N});
  add("r2", {P, U, N, N});
  add("r3", {N, N, P, N});
  add("r4", {U, P, N, N});
  add("r5", {N, N, N, N});
  return table;
}

ScoreMatrix scores_for(const Fixture& f, const data::DatasetTable& table,
                       std::vector<double> values) {
  ScoreMatrix m;
  m.labels = f.registry.labels();
  m.registry_ref = f.registry.fingerprint();
  for (const auto& rec : table.records) m.image_refs.push_back(rec.image_ref);
  m.values = std::move(values);
  return m;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("category means are arithmetic means of defined APs") {
  auto f = small_fixture();
  auto spec = eval::make_category_spec(f.category_map);
  std::vector<std::optional<double>> aps = {0.8, 0.6, 0.4, std::nullopt};
  auto means = eval::category_means(aps, spec);
  CHECK(means.at("All") == doctest::Approx((0.8 + 0.6 + 0.4) / 3).epsilon(1e-15));
  CHECK(means.at("Head") == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(means.at("Medium") == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(means.at("Tail") == doctest::Approx(0.4).epsilon(1e-15));
  // Tail-U holds only the undefined label, so it has no mean entry.
  CHECK(means.count("Tail-U") == 0);
}

TEST_CASE("evaluate restricts each label to its known rows") {
  auto f = small_fixture();
  auto table = small_table(f);
  // Label A known rows: r0 P, r1 N, r2 P, r3 N, r5 N (r4 Unknown).
  // Scores rank r2 first, then r1, r0, r3, r5 for label A.
  std::vector<double> values(6 * 4, 0.5);
  ScoreMatrix m = scores_for(f, table, values);
  m.at(0, 0) = 0.7;  // r0 positive
  m.at(1, 0) = 0.8;  // r1 negative
  m.at(2, 0) = 0.9;  // r2 positive
  m.at(3, 0) = 0.2;
  m.at(4, 0) = 0.99;  // Unknown row, must not matter
  m.at(5, 0) = 0.1;
  auto report = eval::evaluate(m, table, f.registry, f.category_map);

  // Known ranking for A: r2(P), r1(N), r0(P) -> AP = (1 + 2/3) / 2 = 5/6.
  const auto& row_a = report.per_label[0];
  REQUIRE(row_a.ap.has_value());
  CHECK(*row_a.ap == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(row_a.n_known == 5);
  CHECK(row_a.n_pos == 2);
  CHECK(row_a.prevalence == doctest::Approx(2.0 / 5.0).epsilon(1e-15));

  // Label D has no positives; it must be excluded with a reason.
  CHECK_FALSE(report.per_label[3].ap.has_value());
  bool found = false;
  for (const auto& [label, reason] : report.excluded) {
    if (label == "D") {
      found = true;
      CHECK_FALSE(reason.empty());
    }
  }
  CHECK(found);
  CHECK(report.category_means.count("Tail-U") == 0);
}

TEST_CASE("reported means recompute from the per-label rows") {
  auto f = small_fixture();
  auto table = small_table(f);
  std::vector<double> values(6 * 4);
  std::mt19937_64 rng(9);
  for (auto& v : values) v = static_cast<double>(rng() % 1000) / 1000.0;
  auto report = eval::evaluate(scores_for(f, table, values), table, f.registry,
                               f.category_map);
  auto spec = eval::make_category_spec(f.category_map);
  std::vector<std::optional<double>> aps;
  for (const auto& row : report.per_label) aps.push_back(row.ap);
  auto recomputed = eval::category_means(aps, spec);
  REQUIRE(recomputed.size() == report.category_means.size());
  for (const auto& [group, value] : recomputed) {
    CHECK(report.category_means.at(group) ==
          doctest::Approx(value).epsilon(1e-12));
  }
}

TEST_CASE("registry mismatch between scores and table is rejected") {
  auto f = small_fixture();
  auto table = small_table(f);
  auto m = scores_for(f, table, std::vector<double>(24, 0.5));
  m.registry_ref = "deadbeefdeadbeef";
  CHECK_THROWS_AS(eval::evaluate(m, table, f.registry, f.category_map),
                  IncompatibilityError);
}

TEST_CASE("row mismatch between scores and table is rejected") {
  auto f = small_fixture();
  auto table = small_table(f);
  auto m = scores_for(f, table, std::vector<double>(24, 0.5));
  m.image_refs.pop_back();
  m.values.resize(m.image_refs.size() * m.cols());
  CHECK_THROWS_AS(eval::evaluate(m, table, f.registry, f.category_map),
                  ContractError);
}

TEST_CASE("csv and json round-trip preserves every value") {
  auto f = small_fixture();
  auto table = small_table(f);
  std::vector<double> values(6 * 4);
  std::mt19937_64 rng(13);
  for (auto& v : values) v = static_cast<double>(rng() % 1000) / 1000.0;
  auto report = eval::evaluate(scores_for(f, table, values), table, f.registry,
                               f.category_map);

  auto check_equal = [&](const eval::EvalReport& other) {
    REQUIRE(other.per_label.size() == report.per_label.size());
    for (size_t i = 0; i < report.per_label.size(); ++i) {
      CHECK(other.per_label[i].label == report.per_label[i].label);
      CHECK(other.per_label[i].category == report.per_label[i].category);
      CHECK(other.per_label[i].tail_unique == report.per_label[i].tail_unique);
      CHECK(other.per_label[i].ap == report.per_label[i].ap);
      CHECK(other.per_label[i].prevalence == report.per_label[i].prevalence);
      CHECK(other.per_label[i].n_pos == report.per_label[i].n_pos);
      CHECK(other.per_label[i].n_known == report.per_label[i].n_known);
    }
    CHECK(other.category_means == report.category_means);
    CHECK(other.registry_ref == report.registry_ref);
  };
  check_equal(eval::EvalReport::from_csv(report.to_csv()));
  check_equal(eval::EvalReport::from_json(report.to_json()));

  testsupport::ScopedTempDir dir("eval");
  report.save_csv(dir.file("r.csv"));
  report.save_json(dir.file("r.json"));
  check_equal(eval::EvalReport::load(dir.file("r.csv")));
  check_equal(eval::EvalReport::load(dir.file("r.json")));
}

TEST_CASE("prevalence baseline matches hand counts") {
  auto f = small_fixture();
  auto table = small_table(f);
  auto prev = eval::prevalence_baseline(table, f.registry);
  REQUIRE(prev.size() == 4);
  CHECK(*prev[0] == doctest::Approx(2.0 / 5.0).epsilon(1e-15));  // A
  CHECK(*prev[1] == doctest::Approx(2.0 / 5.0).epsilon(1e-15));  // B
  CHECK(*prev[2] == doctest::Approx(2.0 / 5.0).epsilon(1e-15));  // C
  CHECK(*prev[3] == doctest::Approx(0.0).epsilon(1e-15));        // D
}

TEST_CASE("published Head prevalence mean reproduces from the fixed vectors") {
  auto f = published_fixture();
  std::vector<std::optional<double>> aps;
  std::vector<double> prevalences;
  for (int i = 0; i < testsupport::kPublishedLabels; ++i) {
    aps.push_back(testsupport::kPublishedAps[i][0]);
    prevalences.push_back(testsupport::kPublishedPrevalence[i]);
  }
  auto report =
      eval::report_from_aps(f.registry, f.category_map, aps, prevalences);
  CHECK(report.category_prevalence.at("Head") ==
        doctest::Approx(0.0947).epsilon(5e-3));
  CHECK(report.category_prevalence.at("All") ==
        doctest::Approx(0.0385).epsilon(5e-3));
  REQUIRE(report.per_label.size() == 26);
  CHECK(report.category_means.count("Tail-U") == 1);
}

}  // TEST_SUITE
