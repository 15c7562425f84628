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
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cxrlt/labels/registry.hpp"

namespace cxrlt::data {

/// Tri-state ground truth for one (sample, label) cell. Unknown covers both
/// unannotated labels and uncertain annotations.
enum class AnnotationState : std::uint8_t { kUnknown = 0, kNegative, kPositive };

/// One image with its provenance and tri-state annotation vector. The
/// annotation vector length always equals the registry size.
struct SampleRecord {
  std::string image_ref;
  std::string patient_id;
  std::string dataset;
  std::string view;
  bool synthetic = false;
  std::vector<AnnotationState> annotations;
};

/// An ordered list of records bound to one registry. Immutable by
/// convention after construction.
struct DatasetTable {
  std::vector<SampleRecord> records;
  std::string registry_ref;  // identifier binding column order

  size_t size() const { return records.size(); }
};

/// Patient-level split result: split name -> record indices.
struct SplitAssignment {
  std::vector<std::pair<std::string, std::vector<size_t>>> splits;
  std::uint64_t seed = 0;

  const std::vector<size_t>& indices(const std::string& name) const;
};

/// Sub-table with the records at `indices`, preserving order.
DatasetTable subset(const DatasetTable& table, const std::vector<size_t>& indices);

/// Concatenates tables bound to the same registry, preserving per-table
/// order and per-record provenance.
DatasetTable merge_datasets(const std::vector<DatasetTable>& tables);

/// Adds synthetic records to a real table. Every synthetic record must be
/// flagged synthetic and carry at least one Positive Tail-category label;
/// offenders are rejected with a ValidationError listing their rows.
DatasetTable mix_synthetic(const DatasetTable& real, const DatasetTable& synthetic,
                           const labels::CategoryMap& category_map);

/// Deterministic patient-level split. Patients are shuffled by a seeded
/// PRNG and partitioned so patient-count proportions match `ratios` as
/// closely as integer rounding allows; all records of a patient land in
/// one split. Synthetic records bypass patient logic and always join the
/// first split.
SplitAssignment patient_split(const DatasetTable& table,
                              const std::vector<std::pair<std::string, double>>& ratios,
                              std::uint64_t seed);

/// Per-label positive counts over a table (registry-length vector).
std::vector<std::int64_t> positive_counts(const DatasetTable& table, int label_count);

}  // namespace cxrlt::data
