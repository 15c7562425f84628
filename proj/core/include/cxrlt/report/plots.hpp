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

#include "cxrlt/eval/report.hpp"
#include "cxrlt/labels/registry.hpp"

namespace cxrlt::report {

/// Descending bar chart of per-label positive counts for one dataset,
/// with horizontal markers at the Head and Medium thresholds. Writes a
/// raster image (format by extension, e.g. .png); deterministic output.
void plot_distribution(const labels::LabelRegistry& registry,
                       const std::string& dataset,
                       const labels::CategoryThresholds& thresholds,
                       const std::string& path);

/// Per-category bar chart of (variant mean - base mean). Both reports
/// must share registry binding and category groups.
void plot_delta(const eval::EvalReport& base, const eval::EvalReport& variant,
                const std::string& path);

/// Category mean deltas used by plot_delta, exposed for testing.
std::map<std::string, double> category_deltas(const eval::EvalReport& base,
                                              const eval::EvalReport& variant);

}  // namespace cxrlt::report
