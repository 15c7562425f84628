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

#include "cxrlt/pipeline/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cxrlt/util/error.hpp"

namespace cxrlt::pipeline {

namespace {

using nlohmann::json;

const json& expect_object(const json& node, const std::string& where) {
  if (!node.is_object()) {
    throw ConfigError("config: " + where + " must be an object");
  }
  return node;
}

void check_keys(const json& node, const std::string& where,
                const std::set<std::string>& allowed) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
    }
  }
}

template <typename T>
T get_or(const json& node, const std::string& key, const std::string& where,
         T fallback) {
  auto it = node.find(key);
  if (it == node.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for '" + key + "' in " + where);
  }
}

template <typename T>
T require(const json& node, const std::string& key, const std::string& where) {
  auto it = node.find(key);
  if (it == node.end()) {
    throw ConfigError("config: missing key '" + key + "' in " + where);
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for '" + key + "' in " + where);
  }
}

std::optional<std::uint64_t> optional_seed(const json& node,
                                           const std::string& where) {
  auto it = node.find("seed");
  if (it == node.end()) return std::nullopt;
  if (!it->is_number_unsigned()) {
    throw ConfigError("config: seed in " + where +
                      " must be a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

data::PromptTemplate parse_template(const json& node, const std::string& where) {
  expect_object(node, where);
  check_keys(node, where, {"text", "slots"});
  data::PromptTemplate tpl;
  tpl.text = require<std::string>(node, "text", where);
  auto slots = node.find("slots");
  if (slots == node.end() || !slots->is_object()) {
    throw ConfigError("config: " + where + " needs an object 'slots'");
  }
  for (auto it = slots->begin(); it != slots->end(); ++it) {
    if (!it.value().is_array()) {
      throw ConfigError("config: slot '" + it.key() + "' in " + where +
                        " must list candidate labels");
    }
    std::vector<std::string> candidates;
    for (const auto& c : it.value()) {
      if (!c.is_string()) {
        throw ConfigError("config: slot '" + it.key() + "' in " + where +
                          " must list candidate labels");
      }
      candidates.push_back(c.get<std::string>());
    }
    tpl.slots.emplace_back(it.key(), std::move(candidates));
  }
  return tpl;
}

}  // namespace

train::StageConfig StageSpec::engine_config(std::uint64_t default_seed) const {
  train::StageConfig config;
  config.name = name;
  config.epochs = epochs;
  config.base_lr = base_lr;
  config.decay_every = decay_every;
  config.decay_factor = decay_factor;
  config.batch_size = batch_size;
  config.seed = seed.value_or(default_seed);
  return config;
}

const DatasetConfig& PipelineConfig::dataset(const std::string& name) const {
  for (const auto& d : datasets) {
    if (d.name == name) return d;
  }
  throw LookupError("config: unknown dataset '" + name + "'");
}

const SplitConfig& PipelineConfig::split(const std::string& name) const {
  for (const auto& s : splits) {
    if (s.name == name) return s;
  }
  throw LookupError("config: unknown split '" + name + "'");
}

const StageSpec& PipelineConfig::stage(const std::string& name) const {
  for (const auto& s : stages) {
    if (s.name == name) return s;
  }
  throw LookupError("config: unknown stage '" + name + "'");
}

SplitRef parse_split_ref(const std::string& ref) {
  const auto slash = ref.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == ref.size()) {
    throw ConfigError("config: split reference '" + ref +
                      "' must have the form <split>/<subsplit>");
  }
  return SplitRef{ref.substr(0, slash), ref.substr(slash + 1)};
}

void PipelineConfig::validate() const {
  if (datasets.empty()) throw ConfigError("config: no datasets");
  if (eval.dataset.empty()) throw ConfigError("config: eval.dataset is required");
  dataset(eval.dataset);
  if (dataset(eval.dataset).synthetic) {
    throw ConfigError("config: eval.dataset must be a real dataset");
  }
  labels::CategoryThresholds{eval.head_min, eval.medium_min}.validate();

  auto check_ref = [&](const std::string& ref, const std::string& where) {
    const SplitRef parsed = parse_split_ref(ref);
    const SplitConfig& s = split(parsed.split);
    const bool found =
        std::any_of(s.ratios.begin(), s.ratios.end(),
                    [&](const auto& r) { return r.first == parsed.subsplit; });
    if (!found) {
      throw ConfigError("config: " + where + " references unknown subsplit '" +
                        parsed.subsplit + "' of split '" + parsed.split + "'");
    }
  };
  check_ref(eval.train, "eval.train");
  check_ref(eval.test, "eval.test");

  std::set<std::string> split_names;
  for (const auto& s : splits) {
    if (!split_names.insert(s.name).second) {
      throw ConfigError("config: duplicate split '" + s.name + "'");
    }
    if (s.datasets.empty()) {
      throw ConfigError("config: split '" + s.name + "' lists no datasets");
    }
    for (const auto& d : s.datasets) dataset(d);
    if (s.ratios.empty()) {
      throw ConfigError("config: split '" + s.name + "' lists no ratios");
    }
  }

  if (mix_synthetic) {
    if (!dataset(mix_synthetic->dataset).synthetic) {
      throw ConfigError("config: mix_synthetic.dataset must be synthetic");
    }
    if (dataset(mix_synthetic->into).synthetic) {
      throw ConfigError("config: mix_synthetic.into must be a real dataset");
    }
  }

  std::set<std::string> earlier_stages;
  for (const auto& s : stages) {
    if (s.name.empty()) throw ConfigError("config: stage without a name");
    if (!earlier_stages.insert(s.name).second) {
      throw ConfigError("config: duplicate stage '" + s.name + "'");
    }
    check_ref(s.train, "stage '" + s.name + "' train");
    check_ref(s.val, "stage '" + s.name + "' val");
    if (s.init.rfind("stage:", 0) == 0) {
      const std::string parent = s.init.substr(6);
      if (parent == s.name || !earlier_stages.count(parent)) {
        throw ConfigError("config: stage '" + s.name +
                          "' must init from an earlier stage, got '" + parent +
                          "'");
      }
    } else if (s.init != "random" && s.init.rfind("generalist:", 0) != 0) {
      throw ConfigError("config: stage '" + s.name + "' has unknown init '" +
                        s.init + "'");
    }
    s.engine_config(seed).validate();
  }

  if (ensemble) {
    if (ensemble->members.empty()) {
      throw ConfigError("config: ensemble.members is empty");
    }
    for (const auto& m : ensemble->members) stage(m);
    if (!ensemble->weights.empty() &&
        ensemble->weights.size() != ensemble->members.size()) {
      throw ConfigError("config: ensemble weights/members length mismatch");
    }
  }

  if (delta) {
    auto known = [&](const std::string& name) {
      if (name == "ensemble") return static_cast<bool>(ensemble);
      return std::any_of(stages.begin(), stages.end(),
                         [&](const auto& s) { return s.name == name; });
    };
    if (!known(delta->base) || !known(delta->variant)) {
      throw ConfigError("config: delta references an unknown score set");
    }
  }

  // `labels` is bound to the registry at run time; validate the rest.
  train::ModelSpec model_check = model;
  if (model_check.labels == 0) model_check.labels = 1;
  model_check.validate();
  if (normalization.stddev <= 0.0f) {
    throw ConfigError("config: normalization.stddev must be > 0");
  }
}

std::string PipelineConfig::resolved_json() const {
  json doc;
  doc["format"] = "cxrlt-config-v1";
  doc["seed"] = seed;
  doc["out_dir"] = out_dir;
  doc["aliases"] = json::object();
  for (const auto& [k, v] : aliases) doc["aliases"][k] = v;
  doc["datasets"] = json::object();
  for (const auto& d : datasets) {
    doc["datasets"][d.name] = {{"manifest", d.manifest},
                               {"synthetic", d.synthetic}};
  }
  doc["eval"] = {{"dataset", eval.dataset}, {"train", eval.train},
                 {"test", eval.test},       {"head_min", eval.head_min},
                 {"medium_min", eval.medium_min}};
  doc["splits"] = json::array();
  for (const auto& s : splits) {
    json ratios = json::array();
    for (const auto& [name, frac] : s.ratios) ratios.push_back({name, frac});
    doc["splits"].push_back({{"name", s.name},
                             {"datasets", s.datasets},
                             {"ratios", ratios},
                             {"seed", s.seed.value_or(seed)}});
  }
  doc["model"] = {{"type", model.type},
                  {"input_side", model.input_side},
                  {"channels", model.channels},
                  {"hidden", model.hidden}};
  doc["normalization"] = {{"mean", normalization.mean},
                          {"stddev", normalization.stddev}};
  if (mix_synthetic) {
    doc["mix_synthetic"] = {{"into", mix_synthetic->into},
                            {"dataset", mix_synthetic->dataset}};
  }
  doc["stages"] = json::array();
  for (const auto& s : stages) {
    doc["stages"].push_back({{"name", s.name},
                             {"train", s.train},
                             {"val", s.val},
                             {"init", s.init},
                             {"epochs", s.epochs},
                             {"base_lr", s.base_lr},
                             {"decay_every", s.decay_every},
                             {"decay_factor", s.decay_factor},
                             {"batch_size", s.batch_size},
                             {"seed", s.seed.value_or(seed)}});
  }
  if (ensemble) {
    doc["ensemble"] = {{"members", ensemble->members}};
    if (!ensemble->weights.empty()) doc["ensemble"]["weights"] = ensemble->weights;
  }
  if (delta) {
    doc["delta"] = {{"base", delta->base}, {"variant", delta->variant}};
  }
  if (prompts) {
    json templates = json::array();
    for (const auto& t : prompts->templates) {
      json slots = json::object();
      for (const auto& [slot, candidates] : t.slots) slots[slot] = candidates;
      templates.push_back({{"text", t.text}, {"slots", slots}});
    }
    doc["prompts"] = {{"count", prompts->count},
                      {"seed", prompts->seed.value_or(seed)},
                      {"templates", templates}};
    doc["prompts"]["phrases"] = json::object();
    for (const auto& [k, v] : prompts->phrases) doc["prompts"]["phrases"][k] = v;
  }
  return doc.dump(2) + "\n";
}

PipelineConfig parse_config(const std::string& text,
                            const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  expect_object(doc, "document root");
  check_keys(doc, "document root",
             {"format", "seed", "out_dir", "aliases", "datasets", "eval",
              "splits", "model", "normalization", "mix_synthetic", "stages",
              "ensemble", "delta", "prompts"});
  if (doc.contains("format") &&
      doc["format"].get<std::string>() != "cxrlt-config-v1") {
    throw ConfigError("config: unsupported format tag");
  }

  PipelineConfig config;
  config.base_dir = base_dir;
  config.seed = get_or<std::uint64_t>(doc, "seed", "document root", 0);
  config.out_dir = get_or<std::string>(doc, "out_dir", "document root", "out");

  if (doc.contains("aliases")) {
    const json& aliases = expect_object(doc["aliases"], "aliases");
    for (auto it = aliases.begin(); it != aliases.end(); ++it) {
      if (!it.value().is_string()) {
        throw ConfigError("config: alias '" + it.key() + "' must map to a string");
      }
      config.aliases[it.key()] = it.value().get<std::string>();
    }
  }

  const json datasets_node =
      doc.contains("datasets") ? doc["datasets"] : json::object();
  const json& datasets = expect_object(datasets_node, "datasets");
  for (auto it = datasets.begin(); it != datasets.end(); ++it) {
    const std::string where = "datasets." + it.key();
    const json& node = expect_object(it.value(), where);
    check_keys(node, where, {"manifest", "synthetic"});
    DatasetConfig d;
    d.name = it.key();
    d.manifest = require<std::string>(node, "manifest", where);
    d.synthetic = get_or<bool>(node, "synthetic", where, false);
    config.datasets.push_back(std::move(d));
  }

  {
    const json eval_node = doc.contains("eval") ? doc["eval"] : json::object();
    const json& node = expect_object(eval_node, "eval");
    check_keys(node, "eval",
               {"dataset", "train", "test", "head_min", "medium_min"});
    config.eval.dataset = require<std::string>(node, "dataset", "eval");
    config.eval.train = require<std::string>(node, "train", "eval");
    config.eval.test = require<std::string>(node, "test", "eval");
    config.eval.head_min =
        get_or<std::int64_t>(node, "head_min", "eval", config.eval.head_min);
    config.eval.medium_min = get_or<std::int64_t>(node, "medium_min", "eval",
                                                  config.eval.medium_min);
  }

  if (doc.contains("splits")) {
    if (!doc["splits"].is_array()) {
      throw ConfigError("config: splits must be an array");
    }
    for (const auto& node : doc["splits"]) {
      const std::string where = "splits[]";
      expect_object(node, where);
      check_keys(node, where, {"name", "datasets", "ratios", "seed"});
      SplitConfig s;
      s.name = require<std::string>(node, "name", where);
      s.datasets = require<std::vector<std::string>>(node, "datasets", where);
      auto ratios = node.find("ratios");
      if (ratios == node.end() || !ratios->is_array()) {
        throw ConfigError("config: split '" + s.name + "' needs a ratios array");
      }
      for (const auto& r : *ratios) {
        if (!r.is_array() || r.size() != 2 || !r[0].is_string() ||
            !r[1].is_number()) {
          throw ConfigError("config: split '" + s.name +
                            "' ratios must be [name, fraction] pairs");
        }
        s.ratios.emplace_back(r[0].get<std::string>(), r[1].get<double>());
      }
      s.seed = optional_seed(node, "split '" + s.name + "'");
      config.splits.push_back(std::move(s));
    }
  }

  if (doc.contains("model")) {
    const json& node = expect_object(doc["model"], "model");
    check_keys(node, "model", {"type", "input_side", "channels", "hidden"});
    config.model.type =
        get_or<std::string>(node, "type", "model", config.model.type);
    config.model.input_side =
        get_or<int>(node, "input_side", "model", config.model.input_side);
    config.model.channels =
        get_or<int>(node, "channels", "model", config.model.channels);
    config.model.hidden =
        get_or<int>(node, "hidden", "model", config.model.hidden);
  }

  if (doc.contains("normalization")) {
    const json& node = expect_object(doc["normalization"], "normalization");
    check_keys(node, "normalization", {"mean", "stddev"});
    config.normalization.mean = get_or<float>(node, "mean", "normalization",
                                              config.normalization.mean);
    config.normalization.stddev = get_or<float>(
        node, "stddev", "normalization", config.normalization.stddev);
  }

  if (doc.contains("mix_synthetic")) {
    const json& node = expect_object(doc["mix_synthetic"], "mix_synthetic");
    check_keys(node, "mix_synthetic", {"into", "dataset"});
    MixConfig mix;
    mix.into = require<std::string>(node, "into", "mix_synthetic");
    mix.dataset = require<std::string>(node, "dataset", "mix_synthetic");
    config.mix_synthetic = mix;
  }

  if (doc.contains("stages")) {
    if (!doc["stages"].is_array()) {
      throw ConfigError("config: stages must be an array");
    }
    for (const auto& node : doc["stages"]) {
      expect_object(node, "stages[]");
      StageSpec s;
      s.name = require<std::string>(node, "name", "stages[]");
      const std::string where = "stage '" + s.name + "'";
      check_keys(node, where,
                 {"name", "train", "val", "init", "epochs", "base_lr",
                  "decay_every", "decay_factor", "batch_size", "seed"});
      s.train = require<std::string>(node, "train", where);
      s.val = require<std::string>(node, "val", where);
      s.init = get_or<std::string>(node, "init", where, s.init);
      s.epochs = get_or<int>(node, "epochs", where, s.epochs);
      s.base_lr = get_or<double>(node, "base_lr", where, s.base_lr);
      s.decay_every = get_or<int>(node, "decay_every", where, s.decay_every);
      s.decay_factor =
          get_or<double>(node, "decay_factor", where, s.decay_factor);
      s.batch_size = get_or<int>(node, "batch_size", where, s.batch_size);
      s.seed = optional_seed(node, where);
      config.stages.push_back(std::move(s));
    }
  }

  if (doc.contains("ensemble")) {
    const json& node = expect_object(doc["ensemble"], "ensemble");
    check_keys(node, "ensemble", {"members", "weights"});
    EnsembleConfig e;
    e.members = require<std::vector<std::string>>(node, "members", "ensemble");
    e.weights =
        get_or<std::vector<double>>(node, "weights", "ensemble", {});
    config.ensemble = std::move(e);
  }

  if (doc.contains("delta")) {
    const json& node = expect_object(doc["delta"], "delta");
    check_keys(node, "delta", {"base", "variant"});
    DeltaConfig d;
    d.base = require<std::string>(node, "base", "delta");
    d.variant = require<std::string>(node, "variant", "delta");
    config.delta = d;
  }

  if (doc.contains("prompts")) {
    const json& node = expect_object(doc["prompts"], "prompts");
    check_keys(node, "prompts", {"count", "seed", "templates", "phrases"});
    PromptsConfig p;
    p.count = require<std::uint64_t>(node, "count", "prompts");
    p.seed = optional_seed(node, "prompts");
    auto templates = node.find("templates");
    if (templates == node.end() || !templates->is_array()) {
      throw ConfigError("config: prompts needs a templates array");
    }
    for (const auto& t : *templates) {
      p.templates.push_back(parse_template(t, "prompts.templates[]"));
    }
    if (node.contains("phrases")) {
      const json& phrases = expect_object(node["phrases"], "prompts.phrases");
      for (auto it = phrases.begin(); it != phrases.end(); ++it) {
        if (!it.value().is_string()) {
          throw ConfigError("config: prompt phrase '" + it.key() +
                            "' must map to a string");
        }
        p.phrases[it.key()] = it.value().get<std::string>();
      }
    }
    config.prompts = std::move(p);
  }

  config.validate();
  return config;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string dir = ".";
  const auto slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  return parse_config(buffer.str(), dir);
}

}  // namespace cxrlt::pipeline
