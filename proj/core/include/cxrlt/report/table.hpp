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

#include <optional>
#include <string>
#include <vector>

#include "cxrlt/eval/report.hpp"

namespace cxrlt::report {

/// Side-by-side comparison of several eval reports over one registry:
/// rows grouped Head / Medium / Tail / Tail-U, one AP column per report,
/// best value per row flagged, means block at the bottom.
struct RenderedTable {
  std::string csv;   // machine-readable; round-trips via parse_table_csv
  std::string text;  // human-readable aligned table
};

RenderedTable render_table(
    const std::vector<std::pair<std::string, eval::EvalReport>>& reports);

/// Parsed form of the CSV emitted by render_table.
struct ParsedTable {
  std::vector<std::string> report_names;
  struct Row {
    std::string label;
    std::string category;  // Head/Medium/Tail/Tail-U
    double prevalence = 0.0;
    std::vector<std::optional<double>> aps;
    std::string best;  // report name, empty when no AP defined
  };
  std::vector<Row> rows;
  struct MeanRow {
    std::string group;
    std::optional<double> prevalence;
    std::vector<std::optional<double>> aps;
    std::string best;
  };
  std::vector<MeanRow> means;
};

ParsedTable parse_table_csv(const std::string& csv_text);

void save_table(const RenderedTable& table, const std::string& csv_path,
                const std::string& text_path);

}  // namespace cxrlt::report
