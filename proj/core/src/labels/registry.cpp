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

#include "cxrlt/labels/registry.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cxrlt/util/csv.hpp"
#include "cxrlt/util/error.hpp"

namespace cxrlt::labels {

namespace {

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string canonical_key(const std::string& raw) {
  return lower(csv::trim(raw));
}

}  // namespace

std::string category_name(Category c) {
  switch (c) {
    case Category::kHead:
      return "Head";
    case Category::kMedium:
      return "Medium";
    case Category::kTail:
      return "Tail";
  }
  throw ContractError("invalid category value");
}

Category category_from_name(const std::string& name) {
  if (name == "Head") return Category::kHead;
  if (name == "Medium") return Category::kMedium;
  if (name == "Tail") return Category::kTail;
  throw LookupError("unknown category name: " + name);
}

void CategoryThresholds::validate() const {
  if (!(medium_min > 0 && head_min >= medium_min)) {
    throw ConfigError("category thresholds require head_min >= medium_min > 0");
  }
}

std::optional<int> LabelRegistry::find(const std::string& name) const {
  auto it = canonical_index_.find(canonical_key(canonicalize(name)));
  if (it == canonical_index_.end()) return std::nullopt;
  return it->second;
}

int LabelRegistry::index_of(const std::string& name) const {
  auto idx = find(name);
  if (!idx) throw LookupError("unknown label: " + name);
  return *idx;
}

bool LabelRegistry::has_dataset(const std::string& dataset) const {
  return coverage_.count(dataset) > 0;
}

std::vector<std::string> LabelRegistry::dataset_names() const {
  std::vector<std::string> names;
  names.reserve(coverage_.size());
  for (const auto& [name, _] : coverage_) names.push_back(name);
  return names;
}

const std::set<int>& LabelRegistry::coverage(const std::string& dataset) const {
  auto it = coverage_.find(dataset);
  if (it == coverage_.end()) throw LookupError("unknown dataset: " + dataset);
  return it->second;
}

std::int64_t LabelRegistry::positive_count(const std::string& dataset,
                                           int index) const {
  auto it = positive_counts_.find(dataset);
  if (it == positive_counts_.end()) {
    throw LookupError("unknown dataset: " + dataset);
  }
  auto jt = it->second.find(index);
  return jt == it->second.end() ? 0 : jt->second;
}

std::string LabelRegistry::canonicalize(const std::string& raw) const {
  std::string trimmed = csv::trim(raw);
  auto it = aliases_.find(canonical_key(trimmed));
  if (it != aliases_.end()) return it->second;
  return trimmed;
}

LabelRegistry build_registry(const std::vector<DatasetDescriptor>& descriptors,
                             const AliasTable& aliases) {
  if (descriptors.empty()) {
    throw ConfigError("build_registry: empty descriptor list");
  }
  LabelRegistry reg;
  for (const auto& [alias, target] : aliases) {
    reg.aliases_[canonical_key(alias)] = csv::trim(target);
  }
  for (const auto& desc : descriptors) {
    if (reg.coverage_.count(desc.name)) {
      throw ConfigError("duplicate dataset name: " + desc.name);
    }
    if (desc.positive_counts.size() != desc.labels.size()) {
      throw ConfigError("dataset " + desc.name +
                        ": label/count length mismatch");
    }
    std::set<int>& cov = reg.coverage_[desc.name];
    std::map<int, std::int64_t>& counts = reg.positive_counts_[desc.name];
    std::set<std::string> seen_in_dataset;
    for (size_t i = 0; i < desc.labels.size(); ++i) {
      if (desc.positive_counts[i] < 0) {
        throw ConfigError("dataset " + desc.name + ": negative count for " +
                          desc.labels[i]);
      }
      const std::string canonical = reg.canonicalize(desc.labels[i]);
      const std::string key = canonical_key(canonical);
      if (canonical.empty()) {
        throw ConfigError("dataset " + desc.name + ": empty label name");
      }
      if (!seen_in_dataset.insert(key).second) {
        throw ConfigError("dataset " + desc.name + ": duplicate label " +
                          canonical);
      }
      auto it = reg.canonical_index_.find(key);
      int index;
      if (it == reg.canonical_index_.end()) {
        index = static_cast<int>(reg.labels_.size());
        reg.labels_.push_back(canonical);
        reg.canonical_index_[key] = index;
      } else {
        index = it->second;
      }
      cov.insert(index);
      counts[index] = desc.positive_counts[i];
    }
  }
  return reg;
}

CategoryMap categorize(const LabelRegistry& registry, const std::string& dataset,
                       const CategoryThresholds& thresholds) {
  std::vector<std::int64_t> counts(registry.size(), 0);
  for (int i : registry.coverage(dataset)) {
    counts[i] = registry.positive_count(dataset, i);
  }
  return categorize_with_counts(registry, counts, thresholds);
}

CategoryMap categorize_with_counts(const LabelRegistry& registry,
                                   const std::vector<std::int64_t>& counts,
                                   const CategoryThresholds& thresholds) {
  thresholds.validate();
  if (static_cast<int>(counts.size()) != registry.size()) {
    throw ContractError("categorize: counts length does not match registry");
  }
  CategoryMap map;
  map.assignment.resize(registry.size());
  for (int i = 0; i < registry.size(); ++i) {
    std::int64_t n = counts[i];
    if (n > thresholds.head_min) {
      map.assignment[i] = Category::kHead;
    } else if (n >= thresholds.medium_min) {
      map.assignment[i] = Category::kMedium;
    } else {
      map.assignment[i] = Category::kTail;
    }
  }
  return map;
}

std::set<int> tail_unique(const LabelRegistry& registry,
                          const CategoryMap& category_map,
                          const std::string& target) {
  const std::set<int>& target_cov = registry.coverage(target);
  std::set<int> unique;
  for (int i : target_cov) {
    if (category_map.assignment.at(i) != Category::kTail) continue;
    bool elsewhere = false;
    for (const auto& other : registry.dataset_names()) {
      if (other == target) continue;
      if (registry.coverage(other).count(i)) {
        elsewhere = true;
        break;
      }
    }
    if (!elsewhere) unique.insert(i);
  }
  return unique;
}

std::string fingerprint_labels(const std::vector<std::string>& labels) {
  // FNV-1a over the ordered label names.
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& name : labels) {
    for (unsigned char c : name) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0x1f;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string LabelRegistry::fingerprint() const {
  return fingerprint_labels(labels_);
}

std::string LabelRegistry::serialize() const {
  nlohmann::json j;
  j["format"] = "cxrlt-registry-v1";
  j["labels"] = labels_;
  nlohmann::json datasets = nlohmann::json::object();
  for (const auto& [name, cov] : coverage_) {
    nlohmann::json d;
    d["coverage"] = std::vector<int>(cov.begin(), cov.end());
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [idx, n] : positive_counts_.at(name)) {
      counts[std::to_string(idx)] = n;
    }
    d["positive_counts"] = counts;
    datasets[name] = d;
  }
  j["datasets"] = datasets;
  nlohmann::json al = nlohmann::json::object();
  for (const auto& [k, v] : aliases_) al[k] = v;
  j["aliases"] = al;
  return j.dump(2) + "\n";
}

LabelRegistry LabelRegistry::deserialize(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("registry parse failure: ") + e.what());
  }
  if (!j.contains("format") || j["format"] != "cxrlt-registry-v1") {
    throw SchemaError("registry document has unknown format tag");
  }
  LabelRegistry reg;
  reg.labels_ = j.at("labels").get<std::vector<std::string>>();
  for (size_t i = 0; i < reg.labels_.size(); ++i) {
    reg.canonical_index_[canonical_key(reg.labels_[i])] = static_cast<int>(i);
  }
  for (const auto& [name, d] : j.at("datasets").items()) {
    std::set<int>& cov = reg.coverage_[name];
    for (int idx : d.at("coverage").get<std::vector<int>>()) {
      if (idx < 0 || idx >= reg.size()) {
        throw SchemaError("registry coverage index out of range");
      }
      cov.insert(idx);
    }
    std::map<int, std::int64_t>& counts = reg.positive_counts_[name];
    for (const auto& [key, n] : d.at("positive_counts").items()) {
      counts[std::stoi(key)] = n.get<std::int64_t>();
    }
  }
  for (const auto& [k, v] : j.at("aliases").items()) {
    reg.aliases_[k] = v.get<std::string>();
  }
  return reg;
}

void LabelRegistry::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write registry: " + path);
  out << serialize();
}

LabelRegistry LabelRegistry::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open registry: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace cxrlt::labels
