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

#include "cxrlt/data/table.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "cxrlt/util/error.hpp"

namespace cxrlt::data {

const std::vector<size_t>& SplitAssignment::indices(const std::string& name) const {
  for (const auto& [n, idx] : splits) {
    if (n == name) return idx;
  }
  throw LookupError("unknown split: " + name);
}

DatasetTable subset(const DatasetTable& table, const std::vector<size_t>& indices) {
  DatasetTable out;
  out.registry_ref = table.registry_ref;
  out.records.reserve(indices.size());
  for (size_t i : indices) {
    out.records.push_back(table.records.at(i));
  }
  return out;
}

DatasetTable merge_datasets(const std::vector<DatasetTable>& tables) {
  if (tables.empty()) throw ContractError("merge_datasets: no tables");
  DatasetTable out;
  out.registry_ref = tables.front().registry_ref;
  for (const auto& t : tables) {
    if (t.registry_ref != out.registry_ref) {
      throw IncompatibilityError("merge_datasets: registry mismatch (" +
                                 t.registry_ref + " vs " + out.registry_ref + ")");
    }
    out.records.insert(out.records.end(), t.records.begin(), t.records.end());
  }
  return out;
}

DatasetTable mix_synthetic(const DatasetTable& real, const DatasetTable& synthetic,
                           const labels::CategoryMap& category_map) {
  if (real.registry_ref != synthetic.registry_ref) {
    throw IncompatibilityError("mix_synthetic: registry mismatch");
  }
  std::vector<size_t> offenders;
  for (size_t r = 0; r < synthetic.records.size(); ++r) {
    const SampleRecord& rec = synthetic.records[r];
    bool ok = rec.synthetic;
    if (ok) {
      bool has_tail_pos = false;
      for (size_t j = 0; j < rec.annotations.size(); ++j) {
        if (rec.annotations[j] == AnnotationState::kPositive &&
            category_map.assignment.at(j) == labels::Category::kTail) {
          has_tail_pos = true;
          break;
        }
      }
      ok = has_tail_pos;
    }
    if (!ok) offenders.push_back(r);
  }
  if (!offenders.empty()) {
    std::ostringstream msg;
    msg << "mix_synthetic: " << offenders.size()
        << " synthetic record(s) lack a Positive tail label (rows";
    for (size_t r : offenders) msg << ' ' << r;
    msg << ")";
    throw ValidationError(msg.str());
  }
  DatasetTable out = real;
  out.records.insert(out.records.end(), synthetic.records.begin(),
                     synthetic.records.end());
  return out;
}

SplitAssignment patient_split(
    const DatasetTable& table,
    const std::vector<std::pair<std::string, double>>& ratios,
    std::uint64_t seed) {
  if (ratios.empty()) throw ContractError("patient_split: no ratios");
  double sum = 0;
  for (const auto& [name, f] : ratios) {
    if (f <= 0) throw ContractError("patient_split: nonpositive fraction for " + name);
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ContractError("patient_split: fractions must sum to 1");
  }

  // Unique patients in first-appearance order; synthetic records bypass.
  std::vector<std::string> patients;
  std::map<std::string, std::vector<size_t>> by_patient;
  std::vector<size_t> synthetic_records;
  for (size_t i = 0; i < table.records.size(); ++i) {
    const SampleRecord& rec = table.records[i];
    if (rec.synthetic) {
      synthetic_records.push_back(i);
      continue;
    }
    auto [it, inserted] = by_patient.try_emplace(rec.patient_id);
    if (inserted) patients.push_back(rec.patient_id);
    it->second.push_back(i);
  }
  const size_t n_patients = patients.size();
  if (n_patients < ratios.size()) {
    throw SplitError("patient_split: fewer patients (" +
                     std::to_string(n_patients) + ") than splits (" +
                     std::to_string(ratios.size()) + ")");
  }

  std::mt19937_64 rng(seed);
  // Fisher-Yates with explicit draws so the permutation depends only on
  // the mt19937_64 stream.
  for (size_t i = n_patients - 1; i > 0; --i) {
    size_t j = rng() % (i + 1);
    std::swap(patients[i], patients[j]);
  }

  // Largest-remainder apportionment of patient counts.
  std::vector<size_t> quota(ratios.size());
  std::vector<double> remainder(ratios.size());
  size_t assigned = 0;
  for (size_t s = 0; s < ratios.size(); ++s) {
    double exact = ratios[s].second * static_cast<double>(n_patients);
    quota[s] = static_cast<size_t>(std::floor(exact));
    remainder[s] = exact - std::floor(exact);
    assigned += quota[s];
  }
  std::vector<size_t> order(ratios.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return remainder[a] > remainder[b];
  });
  for (size_t k = 0; assigned < n_patients; ++k) {
    quota[order[k % order.size()]] += 1;
    ++assigned;
  }
  // Every split gets at least one patient.
  for (size_t s = 0; s < quota.size(); ++s) {
    if (quota[s] == 0) {
      size_t donor = std::max_element(quota.begin(), quota.end()) - quota.begin();
      quota[donor] -= 1;
      quota[s] += 1;
    }
  }

  SplitAssignment out;
  out.seed = seed;
  size_t cursor = 0;
  for (size_t s = 0; s < ratios.size(); ++s) {
    std::vector<size_t> indices;
    for (size_t k = 0; k < quota[s]; ++k) {
      const auto& recs = by_patient.at(patients[cursor + k]);
      indices.insert(indices.end(), recs.begin(), recs.end());
    }
    cursor += quota[s];
    std::sort(indices.begin(), indices.end());
    out.splits.emplace_back(ratios[s].first, std::move(indices));
  }
  if (!synthetic_records.empty()) {
    auto& first = out.splits.front().second;
    first.insert(first.end(), synthetic_records.begin(), synthetic_records.end());
    std::sort(first.begin(), first.end());
  }
  return out;
}

std::vector<std::int64_t> positive_counts(const DatasetTable& table,
                                          int label_count) {
  std::vector<std::int64_t> counts(label_count, 0);
  for (const auto& rec : table.records) {
    if (static_cast<int>(rec.annotations.size()) != label_count) {
      throw ContractError("positive_counts: annotation width mismatch");
    }
    for (int j = 0; j < label_count; ++j) {
      if (rec.annotations[j] == AnnotationState::kPositive) ++counts[j];
    }
  }
  return counts;
}

}  // namespace cxrlt::data
