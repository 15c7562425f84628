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

#include "cxrlt/pipeline/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cxrlt/data/manifest.hpp"
#include "cxrlt/data/prompts.hpp"
#include "cxrlt/ensemble/average.hpp"
#include "cxrlt/eval/report.hpp"
#include "cxrlt/report/plots.hpp"
#include "cxrlt/report/table.hpp"
#include "cxrlt/util/error.hpp"

namespace fs = std::filesystem;

namespace cxrlt::pipeline {

namespace {

using nlohmann::json;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

std::string resolve_against(const std::string& base, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return p.string();
  return (fs::path(base) / p).string();
}

}  // namespace

std::string phase_name(Phase phase) {
  switch (phase) {
    case Phase::kIngest:
      return "ingest";
    case Phase::kSplit:
      return "split";
    case Phase::kTrain:
      return "train";
    case Phase::kPredict:
      return "predict";
    case Phase::kEnsemble:
      return "ensemble";
    case Phase::kEvaluate:
      return "evaluate";
    case Phase::kReport:
      return "report";
    case Phase::kPrompts:
      return "prompts";
  }
  throw ContractError("phase_name: invalid phase");
}

std::string make_run_dir(const std::string& base) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm);
  for (int n = 0;; ++n) {
    fs::path candidate =
        fs::path(base) / ("run-" + std::string(stamp) + "-" + std::to_string(n));
    if (!fs::exists(candidate)) {
      fs::create_directories(candidate);
      return candidate.string();
    }
  }
}

PipelineRunner::PipelineRunner(PipelineConfig config, RunOptions options)
    : config_(std::move(config)), options_(std::move(options)) {
  if (options_.seed) config_.seed = *options_.seed;
  run_dir_ = options_.out_dir.empty() ? make_run_dir(config_.out_dir)
                                      : options_.out_dir;
  fs::create_directories(run_dir_);
}

std::uint64_t PipelineRunner::effective_seed() const { return config_.seed; }

const labels::LabelRegistry& PipelineRunner::registry() {
  if (!registry_) {
    const std::string path = (fs::path(run_dir_) / "registry.json").string();
    if (!fs::exists(path)) {
      throw ContractError("no registry in " + run_dir_ + "; run ingest first");
    }
    registry_ = labels::LabelRegistry::load(path);
  }
  return *registry_;
}

const data::DatasetTable& PipelineRunner::table(const std::string& dataset) {
  auto it = tables_.find(dataset);
  if (it == tables_.end()) {
    const DatasetConfig& d = config_.dataset(dataset);
    const std::string path =
        (fs::path(run_dir_) / "tables" / (dataset + ".csv")).string();
    if (!fs::exists(path)) {
      throw ContractError("no table for dataset '" + dataset +
                          "'; run ingest first");
    }
    it = tables_
             .emplace(dataset,
                      data::parse_manifest(path, registry(), dataset, d.synthetic))
             .first;
  }
  return it->second;
}

const data::SplitAssignment& PipelineRunner::split(const std::string& name) {
  auto it = splits_.find(name);
  if (it == splits_.end()) {
    const std::string path =
        (fs::path(run_dir_) / "splits" / (name + ".json")).string();
    if (!fs::exists(path)) {
      throw ContractError("no split '" + name + "'; run split first");
    }
    json doc = json::parse(read_text(path));
    if (doc.value("format", "") != "cxrlt-split-v1") {
      throw SchemaError("split file " + path + ": bad format tag");
    }
    data::SplitAssignment assignment;
    assignment.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& node : doc.at("splits")) {
      assignment.splits.emplace_back(
          node.at("name").get<std::string>(),
          node.at("indices").get<std::vector<size_t>>());
    }
    it = splits_.emplace(name, std::move(assignment)).first;
  }
  return it->second;
}

const labels::CategoryMap& PipelineRunner::category_map() {
  if (!category_map_) {
    const std::string path =
        (fs::path(run_dir_) / "category_map.json").string();
    if (!fs::exists(path)) {
      throw ContractError("no category map; run split first");
    }
    json doc = json::parse(read_text(path));
    if (doc.value("format", "") != "cxrlt-category-map-v1") {
      throw SchemaError("category map " + path + ": bad format tag");
    }
    labels::CategoryMap map;
    for (const auto& name : doc.at("assignment")) {
      map.assignment.push_back(
          labels::category_from_name(name.get<std::string>()));
    }
    for (const auto& idx : doc.at("tail_unique")) {
      map.tail_unique.insert(idx.get<int>());
    }
    if (static_cast<int>(map.assignment.size()) != registry().size()) {
      throw IncompatibilityError("category map " + path +
                                 " does not match the registry size");
    }
    category_map_ = std::move(map);
  }
  return *category_map_;
}

const data::DatasetTable& PipelineRunner::merged_table(
    const std::string& split_name) {
  auto it = merged_.find(split_name);
  if (it == merged_.end()) {
    const SplitConfig& s = config_.split(split_name);
    std::vector<data::DatasetTable> parts;
    for (const auto& d : s.datasets) parts.push_back(table(d));
    it = merged_.emplace(split_name, data::merge_datasets(parts)).first;
  }
  return it->second;
}

data::DatasetTable PipelineRunner::resolve_table(const std::string& ref) {
  const SplitRef parsed = parse_split_ref(ref);
  const SplitConfig& s = config_.split(parsed.split);
  data::DatasetTable out =
      data::subset(merged_table(parsed.split), split(parsed.split).indices(parsed.subsplit));
  if (config_.mix_synthetic && parsed.subsplit == s.ratios.front().first) {
    const bool holds_target =
        std::find(s.datasets.begin(), s.datasets.end(),
                  config_.mix_synthetic->into) != s.datasets.end();
    if (holds_target) {
      out = data::mix_synthetic(out, table(config_.mix_synthetic->dataset),
                                category_map());
    }
  }
  return out;
}

void PipelineRunner::run_ingest() {
  std::vector<labels::DatasetDescriptor> descriptors;
  for (const auto& d : config_.datasets) {
    if (d.synthetic) continue;
    const std::string path = resolve_against(config_.base_dir, d.manifest);
    auto summary = data::scan_manifest(path);
    descriptors.push_back({d.name, summary.labels, summary.positive_counts});
  }
  registry_ = labels::build_registry(descriptors, config_.aliases);
  registry_->save((fs::path(run_dir_) / "registry.json").string());

  fs::create_directories(fs::path(run_dir_) / "tables");
  for (const auto& d : config_.datasets) {
    const std::string path =
        fs::absolute(resolve_against(config_.base_dir, d.manifest)).string();
    auto parsed = data::parse_manifest(path, *registry_, d.name, d.synthetic);
    std::vector<int> columns;
    if (d.synthetic) {
      for (int i = 0; i < registry_->size(); ++i) columns.push_back(i);
    } else {
      columns = data::manifest_columns(*registry_, d.name);
    }
    data::write_manifest(
        parsed, *registry_, columns,
        (fs::path(run_dir_) / "tables" / (d.name + ".csv")).string());
    tables_[d.name] = std::move(parsed);
  }
}

void PipelineRunner::run_split() {
  const labels::LabelRegistry& reg = registry();
  fs::create_directories(fs::path(run_dir_) / "splits");
  for (const auto& s : config_.splits) {
    auto assignment = data::patient_split(merged_table(s.name), s.ratios,
                                          s.seed.value_or(effective_seed()));
    json doc;
    doc["format"] = "cxrlt-split-v1";
    doc["seed"] = assignment.seed;
    doc["splits"] = json::array();
    for (const auto& [name, indices] : assignment.splits) {
      doc["splits"].push_back({{"name", name}, {"indices", indices}});
    }
    write_text((fs::path(run_dir_) / "splits" / (s.name + ".json")).string(),
               doc.dump(2) + "\n");
    splits_[s.name] = std::move(assignment);
  }

  // Categorization counts come from the real eval-dataset records of the
  // eval train split, never from synthetic records.
  const SplitRef train_ref = parse_split_ref(config_.eval.train);
  data::DatasetTable train_table = data::subset(
      merged_table(train_ref.split),
      split(train_ref.split).indices(train_ref.subsplit));
  std::vector<std::int64_t> counts(reg.size(), 0);
  for (const auto& rec : train_table.records) {
    if (rec.synthetic || rec.dataset != config_.eval.dataset) continue;
    for (int j = 0; j < reg.size(); ++j) {
      if (rec.annotations[j] == data::AnnotationState::kPositive) ++counts[j];
    }
  }
  const labels::CategoryThresholds thresholds{config_.eval.head_min,
                                              config_.eval.medium_min};
  labels::CategoryMap map = labels::categorize_with_counts(reg, counts, thresholds);
  map.tail_unique = labels::tail_unique(reg, map, config_.eval.dataset);

  json doc;
  doc["format"] = "cxrlt-category-map-v1";
  doc["thresholds"] = {{"head_min", thresholds.head_min},
                       {"medium_min", thresholds.medium_min}};
  doc["assignment"] = json::array();
  for (auto c : map.assignment) doc["assignment"].push_back(labels::category_name(c));
  doc["tail_unique"] = json::array();
  for (int idx : map.tail_unique) doc["tail_unique"].push_back(idx);
  doc["counts"] = counts;
  write_text((fs::path(run_dir_) / "category_map.json").string(),
             doc.dump(2) + "\n");
  category_map_ = std::move(map);
}

void PipelineRunner::run_train() {
  const labels::LabelRegistry& reg = registry();
  bool ran_any = false;
  for (const auto& stage : config_.stages) {
    if (!options_.stage.empty() && stage.name != options_.stage) continue;
    ran_any = true;

    train::ModelSpec spec = config_.model;
    spec.labels = reg.size();
    auto model = train::make_model(spec);
    const train::StageConfig engine = stage.engine_config(effective_seed());

    std::vector<std::string> parent_chain;
    if (stage.init == "random") {
      train::init_random(*model, engine.seed);
      parent_chain = {"random"};
    } else if (stage.init.rfind("stage:", 0) == 0) {
      auto parent = train::Checkpoint::load(
          (fs::path(run_dir_) / "stages" / stage.init.substr(6) / "checkpoint")
              .string());
      train::init_from_checkpoint(*model, parent, engine.seed);
      parent_chain = parent.stage_chain;
    } else {
      auto parent = train::Checkpoint::load(
          resolve_against(config_.base_dir, stage.init.substr(11)));
      train::init_from_checkpoint(*model, parent, engine.seed);
      parent_chain = parent.stage_chain;
    }

    const fs::path stage_dir = fs::path(run_dir_) / "stages" / stage.name;
    fs::create_directories(stage_dir);
    train::Checkpoint::from_model(*model, parent_chain, -1, 0.0, engine.seed)
        .save((stage_dir / "init").string());

    data::DatasetTable train_table = resolve_table(stage.train);
    data::DatasetTable val_table = resolve_table(stage.val);
    auto result = train::run_stage(engine, *model, train_table, val_table, reg,
                                   parent_chain, config_.normalization, &cache_,
                                   (stage_dir / "diverged").string());
    result.checkpoint.save((stage_dir / "checkpoint").string());
    train::save_history(result.history, (stage_dir / "history.csv").string());
  }
  if (!ran_any && !options_.stage.empty()) {
    throw LookupError("train: unknown stage '" + options_.stage + "'");
  }
}

std::vector<std::string> PipelineRunner::score_members() const {
  if (config_.ensemble) return config_.ensemble->members;
  std::vector<std::string> members;
  for (const auto& s : config_.stages) members.push_back(s.name);
  return members;
}

void PipelineRunner::run_predict() {
  const labels::LabelRegistry& reg = registry();
  data::DatasetTable test_table = resolve_table(config_.eval.test);
  fs::create_directories(fs::path(run_dir_) / "scores");
  for (const auto& member : score_members()) {
    auto checkpoint = train::Checkpoint::load(
        (fs::path(run_dir_) / "stages" / member / "checkpoint").string());
    train::ModelSpec spec = config_.model;
    spec.labels = reg.size();
    auto model = train::make_model(spec);
    train::init_from_checkpoint(*model, checkpoint);
    auto scores = train::predict(*model, test_table, reg, config_.normalization,
                                 16, &cache_);
    save_scores(scores,
                (fs::path(run_dir_) / "scores" / (member + ".csv")).string());
  }
}

void PipelineRunner::run_ensemble() {
  if (!config_.ensemble) throw ConfigError("no ensemble configured");
  std::vector<ScoreMatrix> members;
  for (const auto& member : config_.ensemble->members) {
    members.push_back(load_scores(
        (fs::path(run_dir_) / "scores" / (member + ".csv")).string()));
  }
  auto averaged = ensemble::average_scores(members, config_.ensemble->weights);
  save_scores(averaged,
              (fs::path(run_dir_) / "scores" / "ensemble.csv").string());
}

void PipelineRunner::run_evaluate() {
  const labels::LabelRegistry& reg = registry();
  data::DatasetTable test_table = resolve_table(config_.eval.test);
  fs::create_directories(fs::path(run_dir_) / "reports");
  std::vector<std::string> names = score_members();
  if (config_.ensemble) names.push_back("ensemble");
  for (const auto& name : names) {
    auto scores = load_scores(
        (fs::path(run_dir_) / "scores" / (name + ".csv")).string());
    auto report = eval::evaluate(scores, test_table, reg, category_map());
    report.save_csv(
        (fs::path(run_dir_) / "reports" / (name + ".csv")).string());
    report.save_json(
        (fs::path(run_dir_) / "reports" / (name + ".json")).string());
  }
}

void PipelineRunner::run_report() {
  const labels::LabelRegistry& reg = registry();
  std::vector<std::string> names = score_members();
  if (config_.ensemble) names.push_back("ensemble");
  std::vector<std::pair<std::string, eval::EvalReport>> reports;
  for (const auto& name : names) {
    reports.emplace_back(
        name, eval::EvalReport::load(
                  (fs::path(run_dir_) / "reports" / (name + ".json")).string()));
  }
  const fs::path report_dir = fs::path(run_dir_) / "report";
  fs::create_directories(report_dir);
  auto rendered = report::render_table(reports);
  report::save_table(rendered, (report_dir / "table.csv").string(),
                     (report_dir / "table.txt").string());
  report::plot_distribution(
      reg, config_.eval.dataset,
      labels::CategoryThresholds{config_.eval.head_min, config_.eval.medium_min},
      (report_dir / "distribution.png").string());
  if (config_.delta) {
    auto base = eval::EvalReport::load(
        (fs::path(run_dir_) / "reports" / (config_.delta->base + ".json"))
            .string());
    auto variant = eval::EvalReport::load(
        (fs::path(run_dir_) / "reports" / (config_.delta->variant + ".json"))
            .string());
    report::plot_delta(base, variant, (report_dir / "delta.png").string());
  }
}

void PipelineRunner::run_prompts() {
  if (!config_.prompts) throw ConfigError("no prompts configured");
  auto manifest = data::generate_prompts(
      config_.prompts->templates, registry(), category_map(),
      config_.prompts->count, config_.prompts->seed.value_or(effective_seed()),
      config_.prompts->phrases);
  fs::create_directories(fs::path(run_dir_) / "prompts");
  data::write_prompt_manifest(
      manifest, (fs::path(run_dir_) / "prompts" / "prompts.jsonl").string());
}

void PipelineRunner::run(Phase phase) {
  switch (phase) {
    case Phase::kIngest:
      return run_ingest();
    case Phase::kSplit:
      return run_split();
    case Phase::kTrain:
      return run_train();
    case Phase::kPredict:
      return run_predict();
    case Phase::kEnsemble:
      return run_ensemble();
    case Phase::kEvaluate:
      return run_evaluate();
    case Phase::kReport:
      return run_report();
    case Phase::kPrompts:
      return run_prompts();
  }
  throw ContractError("run: invalid phase");
}

void PipelineRunner::run_all() {
  const std::string marker = (fs::path(run_dir_) / "INCOMPLETE").string();
  write_text(marker, "pipeline in progress\n");
  write_text((fs::path(run_dir_) / "config.resolved.json").string(),
             config_.resolved_json());

  std::vector<Phase> phases = {Phase::kIngest,  Phase::kSplit,
                               Phase::kTrain,   Phase::kPredict};
  if (config_.ensemble) phases.push_back(Phase::kEnsemble);
  phases.push_back(Phase::kEvaluate);
  phases.push_back(Phase::kReport);
  if (config_.prompts) phases.push_back(Phase::kPrompts);

  for (Phase phase : phases) {
    try {
      run(phase);
    } catch (const std::exception& e) {
      throw Error("pipeline phase '" + phase_name(phase) +
                  "' failed: " + e.what());
    }
  }
  fs::remove(marker);
}

}  // namespace cxrlt::pipeline
