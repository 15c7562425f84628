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

namespace cxrlt::labels {

/// Frequency category of a label within one dataset.
enum class Category { kHead, kMedium, kTail };

std::string category_name(Category c);
Category category_from_name(const std::string& name);

/// Count thresholds separating Head / Medium / Tail.
///
/// A label is Head when its positive count is strictly greater than
/// `head_min`, Tail when strictly below `medium_min`, and Medium otherwise
/// (both interval endpoints fall into Medium).
struct CategoryThresholds {
  std::int64_t head_min = 30000;
  std::int64_t medium_min = 10000;

  void validate() const;
};

/// Per-label category assignment plus the set of tail labels unique to the
/// target dataset.
struct CategoryMap {
  std::vector<Category> assignment;  // indexed by registry label index
  std::set<int> tail_unique;
};

/// Description of one source dataset: its name, the labels it annotates
/// (in manifest column order) and the per-label positive counts.
struct DatasetDescriptor {
  std::string name;
  std::vector<std::string> labels;
  std::vector<std::int64_t> positive_counts;
};

/// Maps dataset-specific label spellings to canonical names. Keys are
/// matched case-insensitively after trimming; values are canonical names.
using AliasTable = std::map<std::string, std::string>;

/// The unioned label vocabulary across datasets. Label order is fixed at
/// construction and binds column indices everywhere downstream.
/// Immutable after construction; safe to share across threads.
class LabelRegistry {
 public:
  LabelRegistry() = default;

  const std::vector<std::string>& labels() const { return labels_; }
  int size() const { return static_cast<int>(labels_.size()); }

  /// Index of a label name (canonicalized), or nullopt.
  std::optional<int> find(const std::string& name) const;

  /// Index of a label name; throws LookupError when absent.
  int index_of(const std::string& name) const;

  bool has_dataset(const std::string& dataset) const;
  std::vector<std::string> dataset_names() const;

  /// Label indices annotated by `dataset`. Throws LookupError when the
  /// dataset is unknown.
  const std::set<int>& coverage(const std::string& dataset) const;

  /// Positive count of label `index` within `dataset` (0 when the dataset
  /// does not cover the label).
  std::int64_t positive_count(const std::string& dataset, int index) const;

  /// Resolves a raw label spelling to its canonical form via trimming,
  /// case-insensitive matching and the alias table.
  std::string canonicalize(const std::string& raw) const;

  /// Stable hex digest of the ordered label list. Tables carry this to
  /// bind their column order to a registry.
  std::string fingerprint() const;

  /// UTF-8 JSON document; see docs/file-formats.md for the layout.
  std::string serialize() const;
  static LabelRegistry deserialize(const std::string& text);

  void save(const std::string& path) const;
  static LabelRegistry load(const std::string& path);

  friend LabelRegistry build_registry(
      const std::vector<DatasetDescriptor>& descriptors,
      const AliasTable& aliases);

 private:
  std::vector<std::string> labels_;
  std::map<std::string, int> canonical_index_;  // lowercased name -> index
  std::map<std::string, std::set<int>> coverage_;
  std::map<std::string, std::map<int, std::int64_t>> positive_counts_;
  AliasTable aliases_;
};

/// Builds the unioned registry. Labels keep first-seen order across
/// descriptors in input order. Duplicate dataset names and an empty
/// descriptor list are configuration errors.
LabelRegistry build_registry(const std::vector<DatasetDescriptor>& descriptors,
                             const AliasTable& aliases = {});

/// Assigns Head/Medium/Tail to every label covered by `dataset`, using the
/// registry's stored counts. Labels outside the dataset's coverage are
/// assigned Tail (count 0). tail_unique is left empty; see tail_unique().
CategoryMap categorize(const LabelRegistry& registry, const std::string& dataset,
                       const CategoryThresholds& thresholds);

/// Same, but with explicit per-label counts (e.g. train-split positives)
/// overriding the registry's stored counts.
CategoryMap categorize_with_counts(const LabelRegistry& registry,
                                   const std::vector<std::int64_t>& counts,
                                   const CategoryThresholds& thresholds);

/// Stable hex digest of an ordered label list (the registry fingerprint).
std::string fingerprint_labels(const std::vector<std::string>& labels);

/// Tail-category labels of `target` covered by no other dataset.
std::set<int> tail_unique(const LabelRegistry& registry,
                          const CategoryMap& category_map,
                          const std::string& target);

}  // namespace cxrlt::labels
