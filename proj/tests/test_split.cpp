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

#include <random>
#include <set>

#include <doctest.h>

#include "cxrlt/data/table.hpp"
#include "cxrlt/util/error.hpp"

using namespace cxrlt;
using data::AnnotationState;

namespace {

data::DatasetTable make_table(int patients, int images_per_patient,
                              const std::string& registry_ref = "reg") {
  data::DatasetTable table;
  table.registry_ref = registry_ref;
  for (int p = 0; p < patients; ++p) {
    for (int k = 0; k < images_per_patient; ++k) {
      data::SampleRecord rec;
      rec.image_ref = "img-" + std::to_string(p) + "-" + std::to_string(k);
      rec.patient_id = "p" + std::to_string(p);
      rec.dataset = "d";
      rec.annotations = {AnnotationState::kPositive};
      table.records.push_back(std::move(rec));
    }
  }
  return table;
}

std::set<std::string> patients_of(const data::DatasetTable& table,
                                  const std::vector<size_t>& indices) {
  std::set<std::string> out;
  for (size_t i : indices) out.insert(table.records.at(i).patient_id);
  return out;
}

}  // namespace

TEST_SUITE("split") {

TEST_CASE("splits are deterministic in the seed and atomic per patient") {
  auto table = make_table(50, 3);
  auto a = data::patient_split(table, {{"train", 0.8}, {"test", 0.2}}, 42);
  auto b = data::patient_split(table, {{"train", 0.8}, {"test", 0.2}}, 42);
  CHECK(a.splits == b.splits);

  auto c = data::patient_split(table, {{"train", 0.8}, {"test", 0.2}}, 43);
  CHECK(a.splits != c.splits);

  auto train_patients = patients_of(table, a.indices("train"));
  auto test_patients = patients_of(table, a.indices("test"));
  for (const auto& p : test_patients) CHECK(train_patients.count(p) == 0);
  CHECK(a.indices("train").size() + a.indices("test").size() ==
        table.records.size());
  CHECK(train_patients.size() == 40);
  CHECK(test_patients.size() == 10);
}

TEST_CASE("every record lands in exactly one split") {
  auto table = make_table(33, 2);
  auto split = data::patient_split(
      table, {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}}, 9);
  std::set<size_t> seen;
  for (const auto& [name, indices] : split.splits) {
    for (size_t i : indices) CHECK(seen.insert(i).second);
  }
  CHECK(seen.size() == table.records.size());
}

TEST_CASE("split preconditions are enforced") {
  auto table = make_table(10, 1);
  CHECK_THROWS_AS(data::patient_split(table, {}, 0), ContractError);
  CHECK_THROWS_AS(data::patient_split(table, {{"a", 0.7}, {"b", 0.2}}, 0),
                  ContractError);  // sums to 0.9
  CHECK_THROWS_AS(data::patient_split(table, {{"a", 1.2}, {"b", -0.2}}, 0),
                  ContractError);
  auto tiny = make_table(1, 1);
  CHECK_THROWS_AS(data::patient_split(tiny, {{"a", 0.5}, {"b", 0.5}}, 0),
                  SplitError);
}

TEST_CASE("synthetic records always join the first split") {
  auto table = make_table(20, 1);
  for (int s = 0; s < 5; ++s) {
    data::SampleRecord rec;
    rec.image_ref = "syn-" + std::to_string(s);
    rec.patient_id = "synthetic:" + std::to_string(s);
    rec.synthetic = true;
    rec.annotations = {AnnotationState::kPositive};
    table.records.push_back(std::move(rec));
  }
  auto split = data::patient_split(table, {{"train", 0.5}, {"val", 0.5}}, 3);
  int synthetic_in_train = 0;
  for (size_t i : split.indices("train")) {
    if (table.records[i].synthetic) ++synthetic_in_train;
  }
  CHECK(synthetic_in_train == 5);
  for (size_t i : split.indices("val")) CHECK_FALSE(table.records[i].synthetic);
}

TEST_CASE("subset preserves record order") {
  auto table = make_table(5, 1);
  auto sub = data::subset(table, {4, 0, 2});
  REQUIRE(sub.records.size() == 3);
  CHECK(sub.records[0].patient_id == "p4");
  CHECK(sub.records[1].patient_id == "p0");
  CHECK(sub.records[2].patient_id == "p2");
  CHECK(sub.registry_ref == table.registry_ref);
}

TEST_CASE("merge_datasets requires one registry binding") {
  auto a = make_table(2, 1, "reg1");
  auto b = make_table(3, 1, "reg1");
  auto merged = data::merge_datasets({a, b});
  CHECK(merged.records.size() == 5);
  CHECK(merged.records[2].patient_id == "p0");  // b preserves its order

  auto c = make_table(1, 1, "reg2");
  CHECK_THROWS_AS(data::merge_datasets({a, c}), IncompatibilityError);
  CHECK_THROWS_AS(data::merge_datasets({}), ContractError);
}

TEST_CASE("mix_synthetic validates tail positives and the synthetic flag") {
  labels::CategoryMap map;
  map.assignment = {labels::Category::kHead, labels::Category::kTail};

  data::DatasetTable real;
  real.registry_ref = "reg";
  data::SampleRecord r;
  r.patient_id = "p0";
  r.annotations = {AnnotationState::kPositive, AnnotationState::kNegative};
  real.records.push_back(r);

  data::DatasetTable synth;
  synth.registry_ref = "reg";
  data::SampleRecord s;
  s.patient_id = "synthetic:0";
  s.synthetic = true;
  s.annotations = {AnnotationState::kUnknown, AnnotationState::kPositive};
  synth.records.push_back(s);

  auto mixed = data::mix_synthetic(real, synth, map);
  CHECK(mixed.records.size() == 2);
  CHECK(mixed.records[1].synthetic);

  // Head-only positive: rejected, message lists the row.
  synth.records[0].annotations = {AnnotationState::kPositive,
                                  AnnotationState::kNegative};
  CHECK_THROWS_WITH_AS(data::mix_synthetic(real, synth, map),
                       doctest::Contains("rows 0"), ValidationError);

  // Unflagged record: rejected.
  synth.records[0].annotations = {AnnotationState::kUnknown,
                                  AnnotationState::kPositive};
  synth.records[0].synthetic = false;
  CHECK_THROWS_AS(data::mix_synthetic(real, synth, map), ValidationError);

  synth.registry_ref = "other";
  CHECK_THROWS_AS(data::mix_synthetic(real, synth, map),
                  IncompatibilityError);
}

TEST_CASE("positive_counts tallies per label") {
  data::DatasetTable table;
  data::SampleRecord rec;
  rec.annotations = {AnnotationState::kPositive, AnnotationState::kUnknown};
  table.records.push_back(rec);
  rec.annotations = {AnnotationState::kPositive, AnnotationState::kNegative};
  table.records.push_back(rec);
  CHECK(data::positive_counts(table, 2) == std::vector<std::int64_t>{2, 0});
  CHECK_THROWS_AS(data::positive_counts(table, 3), ContractError);
}

}  // TEST_SUITE
