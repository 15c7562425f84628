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

#include "cxrlt/labels/registry.hpp"

namespace cxrlt::data {

/// A parameterized report template. `text` contains `{slot}` placeholders;
/// each slot lists the label names it can express.
struct PromptTemplate {
  std::string text;
  std::vector<std::pair<std::string, std::vector<std::string>>> slots;
};

/// One generated prompt: final text, target label names, and byte-offset
/// spans [begin, end) of the label-bearing phrases within the text.
struct PromptEntry {
  std::string text;
  std::vector<std::string> labels;
  std::vector<std::pair<size_t, size_t>> spans;
};

struct PromptManifest {
  std::vector<PromptEntry> entries;
};

/// Samples `count` prompts over the templates (seeded). Each slot is bound
/// to one of its candidate labels and substituted with that label's surface
/// phrase (from `phrases`, defaulting to the label name). Every entry is
/// guaranteed to target at least one Tail-category label. If a required
/// tail label is expressible by no template, a CoverageError is raised;
/// `required_labels` defaults to all Tail labels of `category_map`.
PromptManifest generate_prompts(
    const std::vector<PromptTemplate>& templates,
    const labels::LabelRegistry& registry,
    const labels::CategoryMap& category_map, size_t count, std::uint64_t seed,
    const std::map<std::string, std::string>& phrases = {},
    const std::optional<std::set<int>>& required_labels = std::nullopt);

/// JSON-lines serialization: one object per prompt with fields `text`,
/// `labels` and `spans`.
void write_prompt_manifest(const PromptManifest& manifest,
                           const std::string& path);
PromptManifest read_prompt_manifest(const std::string& path);

}  // namespace cxrlt::data
