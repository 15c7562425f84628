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

#include "cxrlt/report/table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cxrlt/util/csv.hpp"
#include "cxrlt/util/error.hpp"

namespace cxrlt::report {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::string format_fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return std::string(buf);
}

std::string row_category(const eval::LabelEval& e) {
  if (e.category == labels::Category::kTail && e.tail_unique) return "Tail-U";
  return labels::category_name(e.category);
}

int group_rank(const std::string& category) {
  if (category == "Head") return 0;
  if (category == "Medium") return 1;
  if (category == "Tail") return 2;
  if (category == "Tail-U") return 3;
  throw ContractError("render_table: unknown category " + category);
}

}  // namespace

RenderedTable render_table(
    const std::vector<std::pair<std::string, eval::EvalReport>>& reports) {
  if (reports.empty()) throw ContractError("render_table: no reports");
  const eval::EvalReport& first = reports.front().second;
  for (const auto& [name, rep] : reports) {
    if (rep.registry_ref != first.registry_ref) {
      throw IncompatibilityError("render_table: report '" + name +
                                 "' is bound to a different registry");
    }
    if (rep.per_label.size() != first.per_label.size()) {
      throw IncompatibilityError("render_table: report '" + name +
                                 "' has a different label set");
    }
  }

  // Row order: Head, Medium, Tail, Tail-U; registry order within a group.
  std::vector<size_t> order;
  for (int g = 0; g < 4; ++g) {
    for (size_t i = 0; i < first.per_label.size(); ++i) {
      if (group_rank(row_category(first.per_label[i])) == g) order.push_back(i);
    }
  }

  std::vector<std::vector<std::string>> csv_rows;
  std::vector<std::string> header = {"label", "category", "prevalence"};
  for (const auto& [name, _] : reports) header.push_back(name);
  header.push_back("best");
  csv_rows.push_back(header);

  std::ostringstream text;
  const size_t label_width = [&] {
    size_t w = 5;
    for (const auto& e : first.per_label) w = std::max(w, e.label.size());
    return w + 2;
  }();
  auto text_cell = [&](const std::string& s, size_t width) {
    std::string out = s;
    out.resize(std::max(width, s.size()), ' ');
    return out;
  };
  size_t col_width = 12;
  for (const auto& [name, _] : reports) col_width = std::max(col_width, name.size() + 3);

  text << text_cell("Label", label_width) << text_cell("Category", 10)
       << text_cell("Prev", 9);
  for (const auto& [name, _] : reports) text << text_cell(name, col_width);
  text << "\n";

  int previous_group = -1;
  for (size_t i : order) {
    const auto& base = first.per_label[i];
    const std::string category = row_category(base);
    if (group_rank(category) != previous_group) {
      if (previous_group >= 0) text << "\n";
      previous_group = group_rank(category);
    }

    std::optional<double> best_value;
    std::string best_name;
    for (const auto& [name, rep] : reports) {
      const auto& ap = rep.per_label[i].ap;
      if (ap && (!best_value || *ap > *best_value)) {
        best_value = *ap;
        best_name = name;
      }
    }

    std::vector<std::string> row = {base.label, category,
                                    format_double(base.prevalence)};
    text << text_cell(base.label, label_width) << text_cell(category, 10)
         << text_cell(format_fixed(base.prevalence), 9);
    for (const auto& [name, rep] : reports) {
      const auto& ap = rep.per_label[i].ap;
      row.push_back(ap ? format_double(*ap) : "");
      std::string cell = ap ? format_fixed(*ap) : "--";
      if (ap && name == best_name) cell += " *";
      text << text_cell(cell, col_width);
    }
    row.push_back(best_name);
    csv_rows.push_back(std::move(row));
    text << "\n";
  }

  text << "\n";
  const char* const groups[] = {"All", "Head", "Medium", "Tail", "Tail-U"};
  for (const char* group : groups) {
    std::optional<double> best_value;
    std::string best_name;
    for (const auto& [name, rep] : reports) {
      auto it = rep.category_means.find(group);
      if (it != rep.category_means.end() &&
          (!best_value || it->second > *best_value)) {
        best_value = it->second;
        best_name = name;
      }
    }
    auto pit = first.category_prevalence.find(group);
    std::vector<std::string> row = {"__mean__", group,
                                    pit != first.category_prevalence.end()
                                        ? format_double(pit->second)
                                        : ""};
    text << text_cell(std::string("Mean (") + group + ")", label_width)
         << text_cell("", 10)
         << text_cell(pit != first.category_prevalence.end()
                          ? format_fixed(pit->second)
                          : "--",
                      9);
    for (const auto& [name, rep] : reports) {
      auto it = rep.category_means.find(group);
      row.push_back(it != rep.category_means.end() ? format_double(it->second)
                                                   : "");
      std::string cell =
          it != rep.category_means.end() ? format_fixed(it->second) : "--";
      if (it != rep.category_means.end() && name == best_name) cell += " *";
      text << text_cell(cell, col_width);
    }
    row.push_back(best_name);
    csv_rows.push_back(std::move(row));
    text << "\n";
  }

  RenderedTable out;
  for (const auto& row : csv_rows) out.csv += csv::format_line(row) + "\n";
  out.text = text.str();
  return out;
}

ParsedTable parse_table_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(csv::parse_line(line));
  }
  if (rows.empty() || rows[0].size() < 5 || rows[0][0] != "label" ||
      rows[0].back() != "best") {
    throw SchemaError("comparison table CSV: bad header");
  }
  ParsedTable out;
  out.report_names.assign(rows[0].begin() + 3, rows[0].end() - 1);
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != rows[0].size()) {
      throw SchemaError("comparison table CSV: bad row width");
    }
    std::vector<std::optional<double>> aps;
    for (size_t c = 3; c + 1 < row.size(); ++c) {
      if (row[c].empty()) {
        aps.push_back(std::nullopt);
      } else {
        aps.push_back(std::stod(row[c]));
      }
    }
    if (row[0] == "__mean__") {
      ParsedTable::MeanRow mean;
      mean.group = row[1];
      if (!row[2].empty()) mean.prevalence = std::stod(row[2]);
      mean.aps = std::move(aps);
      mean.best = row.back();
      out.means.push_back(std::move(mean));
    } else {
      ParsedTable::Row parsed;
      parsed.label = row[0];
      parsed.category = row[1];
      parsed.prevalence = std::stod(row[2]);
      parsed.aps = std::move(aps);
      parsed.best = row.back();
      out.rows.push_back(std::move(parsed));
    }
  }
  return out;
}

void save_table(const RenderedTable& table, const std::string& csv_path,
                const std::string& text_path) {
  std::ofstream csv_out(csv_path, std::ios::binary);
  if (!csv_out) throw IoError("cannot write table CSV: " + csv_path);
  csv_out << table.csv;
  std::ofstream text_out(text_path, std::ios::binary);
  if (!text_out) throw IoError("cannot write table text: " + text_path);
  text_out << table.text;
}

}  // namespace cxrlt::report
