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

#include "cxrlt/scores.hpp"

#include <cstdio>

#include "cxrlt/labels/registry.hpp"
#include "cxrlt/util/csv.hpp"
#include "cxrlt/util/error.hpp"

namespace cxrlt {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

}  // namespace

void save_scores(const ScoreMatrix& scores, const std::string& path) {
  if (scores.values.size() != scores.rows() * scores.cols()) {
    throw ContractError("save_scores: ragged score matrix");
  }
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"image_ref"};
  header.insert(header.end(), scores.labels.begin(), scores.labels.end());
  rows.push_back(std::move(header));
  for (size_t r = 0; r < scores.rows(); ++r) {
    std::vector<std::string> row = {scores.image_refs[r]};
    for (size_t c = 0; c < scores.cols(); ++c) {
      row.push_back(format_double(scores.at(r, c)));
    }
    rows.push_back(std::move(row));
  }
  csv::write_file(path, rows);
}

ScoreMatrix load_scores(const std::string& path) {
  auto rows = csv::read_file(path);
  if (rows.empty() || rows[0].empty() || rows[0][0] != "image_ref") {
    throw SchemaError("score file " + path + ": missing image_ref header");
  }
  ScoreMatrix out;
  out.labels.assign(rows[0].begin() + 1, rows[0].end());
  out.registry_ref = labels::fingerprint_labels(out.labels);
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) {
      throw SchemaError("score file " + path + ": row " + std::to_string(r + 1) +
                        " width mismatch");
    }
    out.image_refs.push_back(rows[r][0]);
    for (size_t c = 1; c < rows[r].size(); ++c) {
      try {
        out.values.push_back(std::stod(rows[r][c]));
      } catch (const std::exception&) {
        throw SchemaError("score file " + path + ": row " +
                          std::to_string(r + 1) + ": bad value '" + rows[r][c] +
                          "'");
      }
    }
  }
  return out;
}

}  // namespace cxrlt
