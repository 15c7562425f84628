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

#include "cxrlt/eval/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cxrlt/eval/metrics.hpp"
#include "cxrlt/util/csv.hpp"
#include "cxrlt/util/error.hpp"

namespace cxrlt::eval {

namespace {

const char* const kGroupOrder[] = {"All", "Head", "Medium", "Tail", "Tail-U"};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::string row_category(const LabelEval& e) {
  if (e.category == labels::Category::kTail && e.tail_unique) return "Tail-U";
  return labels::category_name(e.category);
}

}  // namespace

const std::set<int>& CategorySpec::group(const std::string& name) const {
  for (const auto& [n, g] : groups) {
    if (n == name) return g;
  }
  throw LookupError("unknown category group: " + name);
}

void CategorySpec::validate(int label_count) const {
  for (const auto& [name, g] : groups) {
    for (int i : g) {
      if (i < 0 || i >= label_count) {
        throw ContractError("category spec index out of range in group " + name);
      }
    }
  }
  const auto& all = group("All");
  const auto& head = group("Head");
  const auto& medium = group("Medium");
  const auto& tail = group("Tail");
  const auto& tail_u = group("Tail-U");
  if (head.size() + medium.size() + tail.size() != all.size()) {
    throw ContractError("Head/Medium/Tail must partition All");
  }
  for (int i : all) {
    if (!head.count(i) && !medium.count(i) && !tail.count(i)) {
      throw ContractError("label in All missing from Head/Medium/Tail");
    }
  }
  for (int i : tail_u) {
    if (!tail.count(i)) throw ContractError("Tail-U must be a subset of Tail");
  }
}

CategorySpec make_category_spec(const labels::CategoryMap& category_map) {
  CategorySpec spec;
  std::set<int> all, head, medium, tail;
  for (size_t i = 0; i < category_map.assignment.size(); ++i) {
    int idx = static_cast<int>(i);
    all.insert(idx);
    switch (category_map.assignment[i]) {
      case labels::Category::kHead:
        head.insert(idx);
        break;
      case labels::Category::kMedium:
        medium.insert(idx);
        break;
      case labels::Category::kTail:
        tail.insert(idx);
        break;
    }
  }
  spec.groups.emplace_back("All", all);
  spec.groups.emplace_back("Head", head);
  spec.groups.emplace_back("Medium", medium);
  spec.groups.emplace_back("Tail", tail);
  spec.groups.emplace_back("Tail-U", category_map.tail_unique);
  spec.validate(static_cast<int>(category_map.assignment.size()));
  return spec;
}

std::map<std::string, double> category_means(
    const std::vector<std::optional<double>>& aps, const CategorySpec& spec) {
  std::map<std::string, double> means;
  for (const auto& [name, group] : spec.groups) {
    double sum = 0.0;
    size_t n = 0;
    for (int i : group) {
      const auto& ap = aps.at(i);
      if (ap) {
        sum += *ap;
        ++n;
      }
    }
    if (n > 0) means[name] = sum / static_cast<double>(n);
  }
  return means;
}

std::vector<std::optional<double>> prevalence_baseline(
    const data::DatasetTable& table, const labels::LabelRegistry& registry) {
  const int L = registry.size();
  std::vector<std::int64_t> pos(L, 0), known(L, 0);
  for (const auto& rec : table.records) {
    for (int j = 0; j < L; ++j) {
      if (rec.annotations[j] != data::AnnotationState::kUnknown) {
        ++known[j];
        if (rec.annotations[j] == data::AnnotationState::kPositive) ++pos[j];
      }
    }
  }
  std::vector<std::optional<double>> out(L);
  for (int j = 0; j < L; ++j) {
    if (known[j] > 0) {
      out[j] = static_cast<double>(pos[j]) / static_cast<double>(known[j]);
    }
  }
  return out;
}

namespace {

EvalReport assemble(const labels::LabelRegistry& registry,
                    const labels::CategoryMap& category_map,
                    const std::vector<std::optional<double>>& aps,
                    const std::vector<double>& prevalences,
                    const std::vector<std::int64_t>& n_pos,
                    const std::vector<std::int64_t>& n_known) {
  EvalReport report;
  report.registry_ref = registry.fingerprint();
  const int L = registry.size();
  for (int j = 0; j < L; ++j) {
    LabelEval e;
    e.label = registry.labels()[j];
    e.category = category_map.assignment.at(j);
    e.tail_unique = category_map.tail_unique.count(j) > 0;
    e.ap = aps[j];
    e.prevalence = prevalences[j];
    e.n_pos = n_pos[j];
    e.n_known = n_known[j];
    report.per_label.push_back(e);
    if (!e.ap) {
      report.excluded.emplace_back(
          e.label, e.n_known == 0 ? "no known annotations" : "zero positives");
    }
  }
  CategorySpec spec = make_category_spec(category_map);
  report.category_means = category_means(aps, spec);
  for (const auto& [name, group] : spec.groups) {
    double sum = 0.0;
    size_t n = 0;
    for (int i : group) {
      if (n_known[i] > 0) {
        sum += prevalences[i];
        ++n;
      }
    }
    if (n > 0) report.category_prevalence[name] = sum / static_cast<double>(n);
  }
  return report;
}

}  // namespace

EvalReport evaluate(const ScoreMatrix& scores, const data::DatasetTable& table,
                    const labels::LabelRegistry& registry,
                    const labels::CategoryMap& category_map) {
  if (table.records.empty()) throw ContractError("evaluate: empty table");
  const int L = registry.size();
  if (static_cast<int>(scores.cols()) != L ||
      scores.rows() != table.records.size()) {
    throw ContractError("evaluate: score matrix shape does not match table");
  }
  if (!scores.registry_ref.empty() &&
      scores.registry_ref != registry.fingerprint()) {
    throw IncompatibilityError("evaluate: score matrix bound to a different registry");
  }

  std::vector<std::optional<double>> aps(L);
  std::vector<double> prevalences(L, 0.0);
  std::vector<std::int64_t> n_pos(L, 0), n_known(L, 0);
  for (int j = 0; j < L; ++j) {
    std::vector<double> col_scores;
    std::vector<int> col_truths;
    for (size_t r = 0; r < table.records.size(); ++r) {
      auto a = table.records[r].annotations.at(j);
      if (a == data::AnnotationState::kUnknown) continue;
      col_scores.push_back(scores.at(r, j));
      col_truths.push_back(a == data::AnnotationState::kPositive ? 1 : 0);
    }
    n_known[j] = static_cast<std::int64_t>(col_truths.size());
    for (int t : col_truths) n_pos[j] += t;
    if (n_known[j] > 0) {
      prevalences[j] =
          static_cast<double>(n_pos[j]) / static_cast<double>(n_known[j]);
      aps[j] = average_precision(col_scores, col_truths);
    }
  }
  return assemble(registry, category_map, aps, prevalences, n_pos, n_known);
}

EvalReport report_from_aps(const labels::LabelRegistry& registry,
                           const labels::CategoryMap& category_map,
                           const std::vector<std::optional<double>>& aps,
                           const std::vector<double>& prevalences) {
  const int L = registry.size();
  if (static_cast<int>(aps.size()) != L ||
      static_cast<int>(prevalences.size()) != L) {
    throw ContractError("report_from_aps: vector length mismatch");
  }
  std::vector<std::int64_t> n_pos(L, 0), n_known(L, 0);
  // External per-label values carry no counts; mark every label as
  // evaluated so prevalence means are formed over all group members.
  for (int j = 0; j < L; ++j) n_known[j] = 1;
  return assemble(registry, category_map, aps, prevalences, n_pos, n_known);
}

std::string EvalReport::to_csv() const {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"label", "category", "prevalence", "n_pos", "n_known", "ap"});
  for (const auto& e : per_label) {
    rows.push_back({e.label, row_category(e), format_double(e.prevalence),
                    std::to_string(e.n_pos), std::to_string(e.n_known),
                    e.ap ? format_double(*e.ap) : ""});
  }
  for (const char* group : kGroupOrder) {
    auto pit = category_prevalence.find(group);
    auto mit = category_means.find(group);
    if (pit == category_prevalence.end() && mit == category_means.end()) continue;
    rows.push_back({"__mean__", group,
                    pit != category_prevalence.end() ? format_double(pit->second) : "",
                    "", "",
                    mit != category_means.end() ? format_double(mit->second) : ""});
  }
  for (const auto& [label, reason] : excluded) {
    rows.push_back({"__excluded__", label, reason, "", "", ""});
  }
  std::string out;
  for (const auto& row : rows) out += csv::format_line(row) + "\n";
  return out;
}

EvalReport EvalReport::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(csv::parse_line(line));
  }
  if (rows.empty() || rows[0] != std::vector<std::string>{"label", "category",
                                                          "prevalence", "n_pos",
                                                          "n_known", "ap"}) {
    throw SchemaError("eval report CSV: bad header");
  }
  EvalReport report;
  std::vector<std::string> label_names;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 6) throw SchemaError("eval report CSV: bad row width");
    if (row[0] == "__mean__") {
      if (!row[2].empty()) report.category_prevalence[row[1]] = std::stod(row[2]);
      if (!row[5].empty()) report.category_means[row[1]] = std::stod(row[5]);
      continue;
    }
    if (row[0] == "__excluded__") {
      report.excluded.emplace_back(row[1], row[2]);
      continue;
    }
    LabelEval e;
    e.label = row[0];
    if (row[1] == "Tail-U") {
      e.category = labels::Category::kTail;
      e.tail_unique = true;
    } else {
      e.category = labels::category_from_name(row[1]);
    }
    e.prevalence = std::stod(row[2]);
    e.n_pos = std::stoll(row[3]);
    e.n_known = std::stoll(row[4]);
    if (!row[5].empty()) e.ap = std::stod(row[5]);
    label_names.push_back(e.label);
    report.per_label.push_back(std::move(e));
  }
  report.registry_ref = labels::fingerprint_labels(label_names);
  return report;
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["format"] = "cxrlt-eval-report-v1";
  j["registry_ref"] = registry_ref;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : per_label) {
    nlohmann::json row;
    row["label"] = e.label;
    row["category"] = row_category(e);
    row["prevalence"] = e.prevalence;
    row["n_pos"] = e.n_pos;
    row["n_known"] = e.n_known;
    if (e.ap) {
      row["ap"] = *e.ap;
    } else {
      row["ap"] = nullptr;
    }
    rows.push_back(row);
  }
  j["per_label"] = rows;
  j["category_means"] = category_means;
  j["category_prevalence"] = category_prevalence;
  nlohmann::json ex = nlohmann::json::array();
  for (const auto& [label, reason] : excluded) {
    ex.push_back({{"label", label}, {"reason", reason}});
  }
  j["excluded"] = ex;
  return j.dump(2) + "\n";
}

EvalReport EvalReport::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("eval report JSON parse failure: ") + e.what());
  }
  if (!j.contains("format") || j["format"] != "cxrlt-eval-report-v1") {
    throw SchemaError("eval report JSON: unknown format tag");
  }
  EvalReport report;
  report.registry_ref = j.at("registry_ref").get<std::string>();
  for (const auto& row : j.at("per_label")) {
    LabelEval e;
    e.label = row.at("label").get<std::string>();
    std::string cat = row.at("category").get<std::string>();
    if (cat == "Tail-U") {
      e.category = labels::Category::kTail;
      e.tail_unique = true;
    } else {
      e.category = labels::category_from_name(cat);
    }
    e.prevalence = row.at("prevalence").get<double>();
    e.n_pos = row.at("n_pos").get<std::int64_t>();
    e.n_known = row.at("n_known").get<std::int64_t>();
    if (!row.at("ap").is_null()) e.ap = row.at("ap").get<double>();
    report.per_label.push_back(std::move(e));
  }
  report.category_means =
      j.at("category_means").get<std::map<std::string, double>>();
  report.category_prevalence =
      j.at("category_prevalence").get<std::map<std::string, double>>();
  for (const auto& ex : j.at("excluded")) {
    report.excluded.emplace_back(ex.at("label").get<std::string>(),
                                 ex.at("reason").get<std::string>());
  }
  return report;
}

void EvalReport::save_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write eval report: " + path);
  out << to_csv();
}

void EvalReport::save_json(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write eval report: " + path);
  out << to_json();
}

EvalReport EvalReport::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open eval report: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    return from_json(ss.str());
  }
  return from_csv(ss.str());
}

}  // namespace cxrlt::eval
