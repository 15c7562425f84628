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

#include "cxrlt/data/manifest.hpp"

#include <filesystem>
#include <optional>

#include "cxrlt/util/csv.hpp"
#include "cxrlt/util/error.hpp"

namespace fs = std::filesystem;

namespace cxrlt::data {

namespace {

constexpr size_t kFixedColumns = 3;  // image_path, patient_id, view

void check_header(const std::vector<std::string>& header,
                  const std::string& path) {
  if (header.size() < kFixedColumns || header[0] != "image_path" ||
      header[1] != "patient_id" || header[2] != "view") {
    throw SchemaError("manifest " + path +
                      ": header must start with image_path,patient_id,view");
  }
}

std::optional<AnnotationState> parse_cell(const std::string& raw) {
  std::string v = csv::trim(raw);
  if (v.empty() || v == "-1") return AnnotationState::kUnknown;
  if (v == "1") return AnnotationState::kPositive;
  if (v == "0") return AnnotationState::kNegative;
  return std::nullopt;
}

}  // namespace

ManifestSummary scan_manifest(const std::string& path) {
  auto rows = csv::read_file(path);
  if (rows.empty()) throw SchemaError("manifest " + path + ": empty file");
  check_header(rows[0], path);
  ManifestSummary summary;
  summary.labels.assign(rows[0].begin() + kFixedColumns, rows[0].end());
  summary.positive_counts.assign(summary.labels.size(), 0);
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) {
      throw SchemaError("manifest " + path + ": row " + std::to_string(r + 1) +
                        " has " + std::to_string(rows[r].size()) +
                        " fields, expected " + std::to_string(rows[0].size()));
    }
    for (size_t c = 0; c < summary.labels.size(); ++c) {
      auto st = parse_cell(rows[r][kFixedColumns + c]);
      if (!st) {
        throw SchemaError("manifest " + path + ": row " + std::to_string(r + 1) +
                          ", column " + summary.labels[c] +
                          ": malformed cell '" + rows[r][kFixedColumns + c] + "'");
      }
      if (*st == AnnotationState::kPositive) ++summary.positive_counts[c];
    }
    ++summary.rows;
  }
  return summary;
}

DatasetTable parse_manifest(const std::string& path,
                            const labels::LabelRegistry& registry,
                            const std::string& dataset, bool synthetic) {
  auto rows = csv::read_file(path);
  if (rows.empty()) throw SchemaError("manifest " + path + ": empty file");
  check_header(rows[0], path);

  const fs::path base = fs::path(path).parent_path();
  const std::set<int>* coverage = nullptr;
  if (!synthetic) coverage = &registry.coverage(dataset);

  std::vector<int> column_index;  // manifest label column -> registry index
  for (size_t c = kFixedColumns; c < rows[0].size(); ++c) {
    auto idx = registry.find(rows[0][c]);
    if (!idx) {
      throw SchemaError("manifest " + path + ": unknown label column '" +
                        rows[0][c] + "'");
    }
    if (coverage && !coverage->count(*idx)) {
      throw SchemaError("manifest " + path + ": label column '" + rows[0][c] +
                        "' is outside the coverage of dataset " + dataset);
    }
    column_index.push_back(*idx);
  }

  DatasetTable table;
  table.registry_ref = registry.fingerprint();
  size_t synthetic_counter = 0;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != rows[0].size()) {
      throw SchemaError("manifest " + path + ": row " + std::to_string(r + 1) +
                        " has " + std::to_string(row.size()) +
                        " fields, expected " + std::to_string(rows[0].size()));
    }
    SampleRecord rec;
    fs::path img = csv::trim(row[0]);
    rec.image_ref = img.is_absolute() ? img.string() : (base / img).string();
    rec.patient_id = csv::trim(row[1]);
    rec.view = csv::trim(row[2]);
    rec.dataset = dataset;
    rec.synthetic = synthetic;
    if (rec.patient_id.empty()) {
      if (synthetic) {
        rec.patient_id = "synthetic:" + std::to_string(synthetic_counter++);
      } else {
        throw SchemaError("manifest " + path + ": row " + std::to_string(r + 1) +
                          ": missing patient_id on real data");
      }
    }
    rec.annotations.assign(registry.size(), AnnotationState::kUnknown);
    for (size_t c = 0; c < column_index.size(); ++c) {
      auto st = parse_cell(row[kFixedColumns + c]);
      if (!st) {
        throw SchemaError("manifest " + path + ": row " + std::to_string(r + 1) +
                          ", column " + rows[0][kFixedColumns + c] +
                          ": malformed cell '" + row[kFixedColumns + c] + "'");
      }
      rec.annotations[column_index[c]] = *st;
    }
    table.records.push_back(std::move(rec));
  }
  return table;
}

std::vector<int> manifest_columns(const labels::LabelRegistry& registry,
                                  const std::string& dataset) {
  const auto& cov = registry.coverage(dataset);
  return std::vector<int>(cov.begin(), cov.end());
}

void write_manifest(const DatasetTable& table,
                    const labels::LabelRegistry& registry,
                    const std::vector<int>& label_columns,
                    const std::string& path) {
  const fs::path base = fs::path(path).parent_path();
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"image_path", "patient_id", "view"};
  for (int idx : label_columns) header.push_back(registry.labels().at(idx));
  rows.push_back(std::move(header));
  for (const auto& rec : table.records) {
    std::vector<std::string> row;
    fs::path rel = fs::path(rec.image_ref).lexically_relative(base);
    row.push_back(rel.empty() ? rec.image_ref : rel.generic_string());
    row.push_back(rec.patient_id);
    row.push_back(rec.view);
    for (int idx : label_columns) {
      switch (rec.annotations.at(idx)) {
        case AnnotationState::kPositive:
          row.push_back("1");
          break;
        case AnnotationState::kNegative:
          row.push_back("0");
          break;
        case AnnotationState::kUnknown:
          row.push_back("");
          break;
      }
    }
    rows.push_back(std::move(row));
  }
  csv::write_file(path, rows);
}

}  // namespace cxrlt::data
