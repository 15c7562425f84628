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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cxrlt/data/table.hpp"
#include "cxrlt/labels/registry.hpp"
#include "cxrlt/scores.hpp"

namespace cxrlt::eval {

/// Ordered category -> label-index groups. The canonical spec has the
/// groups All, Head, Medium, Tail and Tail-U, where Head/Medium/Tail
/// partition All and Tail-U is a subset of Tail.
struct CategorySpec {
  std::vector<std::pair<std::string, std::set<int>>> groups;

  const std::set<int>& group(const std::string& name) const;
  void validate(int label_count) const;
};

/// Builds the canonical five-group spec from a category map.
CategorySpec make_category_spec(const labels::CategoryMap& category_map);

/// Per-label evaluation row.
struct LabelEval {
  std::string label;
  labels::Category category = labels::Category::kTail;
  bool tail_unique = false;
  std::optional<double> ap;  // nullopt when undefined (zero positives)
  double prevalence = 0.0;   // n_pos / n_known; 0 when n_known == 0
  std::int64_t n_pos = 0;
  std::int64_t n_known = 0;
};

/// Per-label AP + prevalence plus category macro-means. Excluded labels
/// (undefined AP) carry an explicit reason and never enter the means.
struct EvalReport {
  std::vector<LabelEval> per_label;
  std::map<std::string, double> category_means;
  std::map<std::string, double> category_prevalence;
  std::vector<std::pair<std::string, std::string>> excluded;  // label, reason
  std::string registry_ref;

  /// CSV form `label,category,prevalence,n_pos,n_known,ap` with a means
  /// footer; see docs/file-formats.md.
  std::string to_csv() const;
  static EvalReport from_csv(const std::string& text);

  std::string to_json() const;
  static EvalReport from_json(const std::string& text);

  void save_csv(const std::string& path) const;
  void save_json(const std::string& path) const;
  static EvalReport load(const std::string& path);  // by extension
};

/// Arithmetic mean of the defined APs inside each group. This is the
/// single aggregation rule used everywhere macro-mAP is reported.
std::map<std::string, double> category_means(
    const std::vector<std::optional<double>>& aps, const CategorySpec& spec);

/// Evaluates scores against the table's tri-state annotations: per label,
/// AP over the rows whose annotation is known; labels with no positives or
/// no known rows are excluded with a reason.
EvalReport evaluate(const ScoreMatrix& scores, const data::DatasetTable& table,
                    const labels::LabelRegistry& registry,
                    const labels::CategoryMap& category_map);

/// Builds a report directly from externally supplied per-label APs and
/// prevalences (e.g. published results), running the same category-mean
/// logic as evaluate().
EvalReport report_from_aps(const labels::LabelRegistry& registry,
                           const labels::CategoryMap& category_map,
                           const std::vector<std::optional<double>>& aps,
                           const std::vector<double>& prevalences);

/// Per-label prevalence n_pos / n_known over the table; nullopt for
/// all-Unknown labels.
std::vector<std::optional<double>> prevalence_baseline(
    const data::DatasetTable& table, const labels::LabelRegistry& registry);

}  // namespace cxrlt::eval
