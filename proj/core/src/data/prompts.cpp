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

#include "cxrlt/data/prompts.hpp"

#include <fstream>
#include <random>

#include <json.hpp>

#include "cxrlt/util/error.hpp"

namespace cxrlt::data {

namespace {

bool is_tail(const labels::CategoryMap& map, int index) {
  return map.assignment.at(index) == labels::Category::kTail;
}

std::string phrase_for(const std::map<std::string, std::string>& phrases,
                       const std::string& label) {
  auto it = phrases.find(label);
  return it == phrases.end() ? label : it->second;
}

}  // namespace

PromptManifest generate_prompts(
    const std::vector<PromptTemplate>& templates,
    const labels::LabelRegistry& registry,
    const labels::CategoryMap& category_map, size_t count, std::uint64_t seed,
    const std::map<std::string, std::string>& phrases,
    const std::optional<std::set<int>>& required_labels) {
  if (templates.empty() && count > 0) {
    throw ConfigError("generate_prompts: no templates");
  }

  // Validate templates and collect the tail labels each can express.
  std::set<int> expressible_tail;
  std::vector<std::vector<std::vector<int>>> slot_indices(templates.size());
  for (size_t t = 0; t < templates.size(); ++t) {
    const auto& tmpl = templates[t];
    bool has_tail = false;
    for (const auto& [slot, candidates] : tmpl.slots) {
      if (candidates.empty()) {
        throw ConfigError("generate_prompts: slot '" + slot +
                          "' has no candidate labels");
      }
      std::vector<int> indices;
      for (const auto& name : candidates) {
        int idx = registry.index_of(name);
        indices.push_back(idx);
        if (is_tail(category_map, idx)) {
          has_tail = true;
          expressible_tail.insert(idx);
        }
      }
      slot_indices[t].push_back(std::move(indices));
    }
    if (!has_tail) {
      throw ConfigError("generate_prompts: template '" + tmpl.text +
                        "' cannot express any tail label");
    }
  }

  std::set<int> required;
  if (required_labels) {
    required = *required_labels;
  } else {
    for (int i = 0; i < registry.size(); ++i) {
      if (is_tail(category_map, i)) required.insert(i);
    }
  }
  for (int idx : required) {
    if (!expressible_tail.count(idx)) {
      throw CoverageError("generate_prompts: no template covers tail label '" +
                          registry.labels().at(idx) + "'");
    }
  }

  std::mt19937_64 rng(seed);
  PromptManifest manifest;
  manifest.entries.reserve(count);
  for (size_t n = 0; n < count; ++n) {
    size_t t = rng() % templates.size();
    const auto& tmpl = templates[t];

    // Bind each slot to one candidate; retry until a tail label is present.
    std::vector<int> chosen(tmpl.slots.size());
    bool has_tail = false;
    for (int attempt = 0; attempt < 64 && !has_tail; ++attempt) {
      has_tail = false;
      for (size_t s = 0; s < tmpl.slots.size(); ++s) {
        const auto& cands = slot_indices[t][s];
        chosen[s] = cands[rng() % cands.size()];
        if (is_tail(category_map, chosen[s])) has_tail = true;
      }
    }
    if (!has_tail) {
      // Template validation guarantees some slot has a tail candidate.
      for (size_t s = 0; s < tmpl.slots.size() && !has_tail; ++s) {
        for (int idx : slot_indices[t][s]) {
          if (is_tail(category_map, idx)) {
            chosen[s] = idx;
            has_tail = true;
            break;
          }
        }
      }
    }

    // Substitute placeholders left to right, recording byte spans.
    PromptEntry entry;
    const std::string& text = tmpl.text;
    size_t pos = 0;
    while (pos < text.size()) {
      size_t open = text.find('{', pos);
      if (open == std::string::npos) {
        entry.text += text.substr(pos);
        break;
      }
      size_t close = text.find('}', open);
      if (close == std::string::npos) {
        throw ConfigError("generate_prompts: unbalanced '{' in template '" +
                          text + "'");
      }
      entry.text += text.substr(pos, open - pos);
      std::string slot = text.substr(open + 1, close - open - 1);
      size_t s = 0;
      for (; s < tmpl.slots.size(); ++s) {
        if (tmpl.slots[s].first == slot) break;
      }
      if (s == tmpl.slots.size()) {
        throw ConfigError("generate_prompts: undeclared slot '{" + slot +
                          "}' in template '" + text + "'");
      }
      const std::string& label = registry.labels().at(chosen[s]);
      std::string phrase = phrase_for(phrases, label);
      size_t begin = entry.text.size();
      entry.text += phrase;
      entry.spans.emplace_back(begin, entry.text.size());
      entry.labels.push_back(label);
      pos = close + 1;
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

void write_prompt_manifest(const PromptManifest& manifest,
                           const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write prompt manifest: " + path);
  for (const auto& entry : manifest.entries) {
    nlohmann::json j;
    j["text"] = entry.text;
    j["labels"] = entry.labels;
    nlohmann::json spans = nlohmann::json::array();
    for (const auto& [b, e] : entry.spans) {
      spans.push_back(nlohmann::json::array({b, e}));
    }
    j["spans"] = spans;
    out << j.dump() << '\n';
  }
}

PromptManifest read_prompt_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open prompt manifest: " + path);
  PromptManifest manifest;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("prompt manifest " + path + ": line " +
                        std::to_string(lineno) + ": " + e.what());
    }
    PromptEntry entry;
    entry.text = j.at("text").get<std::string>();
    entry.labels = j.at("labels").get<std::vector<std::string>>();
    for (const auto& span : j.at("spans")) {
      entry.spans.emplace_back(span.at(0).get<size_t>(),
                               span.at(1).get<size_t>());
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

}  // namespace cxrlt::data
