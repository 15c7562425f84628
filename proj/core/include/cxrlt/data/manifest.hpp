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
#include <vector>

#include "cxrlt/data/table.hpp"
#include "cxrlt/labels/registry.hpp"

namespace cxrlt::data {

/// Label columns and per-label positive counts of a manifest, read without
/// a registry. Used to build dataset descriptors before the union exists.
struct ManifestSummary {
  std::vector<std::string> labels;
  std::vector<std::int64_t> positive_counts;
  size_t rows = 0;
};

ManifestSummary scan_manifest(const std::string& path);

/// Parses a dataset manifest CSV (header `image_path,patient_id,view,
/// <label_1>,...,<label_k>`; cells in {1, 0, -1, empty}) into a table
/// bound to `registry`. Cell mapping: 1 -> Positive, 0 -> Negative,
/// empty or -1 -> Unknown. Image paths are resolved relative to the
/// manifest's directory. Synthetic manifests may annotate any registry
/// label and get patient ids "synthetic:<n>" when the cell is empty.
DatasetTable parse_manifest(const std::string& path,
                            const labels::LabelRegistry& registry,
                            const std::string& dataset, bool synthetic = false);

/// Coverage of `dataset` in ascending registry-index order, which is the
/// canonical manifest column order.
std::vector<int> manifest_columns(const labels::LabelRegistry& registry,
                                  const std::string& dataset);

/// Writes the canonical manifest form: header columns in `label_columns`
/// order, cells Positive -> "1", Negative -> "0", Unknown -> "", image
/// paths relativized against the output directory.
void write_manifest(const DatasetTable& table,
                    const labels::LabelRegistry& registry,
                    const std::vector<int>& label_columns,
                    const std::string& path);

}  // namespace cxrlt::data
