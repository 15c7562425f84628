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

#include "cxrlt/train/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cxrlt/util/error.hpp"

namespace fs = std::filesystem;

namespace cxrlt::train {

namespace {

constexpr char kParamsMagic[8] = {'C', 'X', 'R', 'L', 'T', 'P', 'M', '1'};

bool is_bias(const std::string& name) {
  return name.size() >= 5 && name.compare(name.size() - 5, 5, ".bias") == 0;
}

int fan_in(const NamedTensor& t) {
  if (t.shape.size() <= 1) {
    return static_cast<int>(std::max<size_t>(t.value.size(), 1));
  }
  int f = 1;
  for (size_t d = 1; d < t.shape.size(); ++d) f *= t.shape[d];
  return std::max(f, 1);
}

void fill_uniform(NamedTensor& t, float bound, std::mt19937_64& rng) {
  // Fixed-width draws so the stream is reproducible across platforms.
  for (float& v : t.value) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
    v = static_cast<float>((2.0 * u - 1.0) * bound);
  }
}

}  // namespace

std::vector<const NamedTensor*> Model::parameters() const {
  auto mutable_params = const_cast<Model*>(this)->parameters();
  return std::vector<const NamedTensor*>(mutable_params.begin(),
                                         mutable_params.end());
}

void Model::zero_grad() {
  for (NamedTensor* t : parameters()) {
    std::fill(t->grad.begin(), t->grad.end(), 0.0f);
  }
}

void ModelSpec::validate() const {
  if (type != "tiny_cnn" && type != "linear") {
    throw ConfigError("model spec: unknown type '" + type + "'");
  }
  if (labels <= 0) throw ConfigError("model spec: labels must be > 0");
  if (input_side <= 0) throw ConfigError("model spec: input_side must be > 0");
  if (type == "tiny_cnn") {
    if (channels <= 0 || hidden <= 0) {
      throw ConfigError("model spec: channels and hidden must be > 0");
    }
    if (input_side % 8 != 0) {
      throw ConfigError("model spec: tiny_cnn needs input_side divisible by 8");
    }
  }
}

void init_random(Model& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (NamedTensor* t : model.parameters()) {
    if (is_bias(t->name)) {
      std::fill(t->value.begin(), t->value.end(), 0.0f);
    } else {
      fill_uniform(*t, 1.0f / std::sqrt(static_cast<float>(fan_in(*t))), rng);
    }
  }
}

Checkpoint Checkpoint::from_model(const Model& model,
                                  std::vector<std::string> stage_chain,
                                  int epoch, double val_map,
                                  std::uint64_t seed) {
  Checkpoint ckpt;
  ckpt.stage_chain = std::move(stage_chain);
  ckpt.epoch = epoch;
  ckpt.val_map = val_map;
  ckpt.seed = seed;
  for (const NamedTensor* t : model.parameters()) {
    NamedTensor copy;
    copy.name = t->name;
    copy.shape = t->shape;
    copy.value = t->value;
    ckpt.params[t->name] = std::move(copy);
  }
  return ckpt;
}

void Checkpoint::save(const std::string& dir) const {
  fs::create_directories(dir);
  const std::string bin_path = (fs::path(dir) / "params.bin").string();
  std::ofstream out(bin_path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint params: " + bin_path);
  out.write(kParamsMagic, sizeof(kParamsMagic));
  const std::uint32_t count = static_cast<std::uint32_t>(params.size());
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  for (const auto& [name, t] : params) {  // map order: sorted by name
    const std::uint32_t name_len = static_cast<std::uint32_t>(name.size());
    out.write(reinterpret_cast<const char*>(&name_len), sizeof(name_len));
    out.write(name.data(), name_len);
    const std::uint32_t ndim = static_cast<std::uint32_t>(t.shape.size());
    out.write(reinterpret_cast<const char*>(&ndim), sizeof(ndim));
    for (int d : t.shape) {
      const std::int32_t dim = d;
      out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    }
    out.write(reinterpret_cast<const char*>(t.value.data()),
              static_cast<std::streamsize>(t.value.size() * sizeof(float)));
  }
  if (!out) throw IoError("short write to checkpoint params: " + bin_path);

  nlohmann::json meta;
  meta["format"] = "cxrlt-checkpoint-v1";
  meta["stage_chain"] = stage_chain;
  meta["epoch"] = epoch;
  meta["val_map"] = val_map;
  meta["seed"] = seed;
  const std::string meta_path = (fs::path(dir) / "metadata.json").string();
  std::ofstream meta_out(meta_path, std::ios::binary);
  if (!meta_out) throw IoError("cannot write checkpoint metadata: " + meta_path);
  meta_out << meta.dump(2) << "\n";
}

Checkpoint Checkpoint::load(const std::string& dir) {
  const std::string bin_path = (fs::path(dir) / "params.bin").string();
  std::ifstream in(bin_path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint params: " + bin_path);
  char magic[sizeof(kParamsMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kParamsMagic, sizeof(magic)) != 0) {
    throw IoError("bad checkpoint params header: " + bin_path);
  }
  Checkpoint ckpt;
  std::uint32_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint32_t name_len = 0;
    in.read(reinterpret_cast<char*>(&name_len), sizeof(name_len));
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    std::uint32_t ndim = 0;
    in.read(reinterpret_cast<char*>(&ndim), sizeof(ndim));
    NamedTensor t;
    t.name = name;
    size_t total = 1;
    for (std::uint32_t d = 0; d < ndim; ++d) {
      std::int32_t dim = 0;
      in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
      t.shape.push_back(dim);
      total *= static_cast<size_t>(dim);
    }
    t.value.resize(total);
    in.read(reinterpret_cast<char*>(t.value.data()),
            static_cast<std::streamsize>(total * sizeof(float)));
    if (!in) throw IoError("truncated checkpoint params: " + bin_path);
    ckpt.params[name] = std::move(t);
  }

  const std::string meta_path = (fs::path(dir) / "metadata.json").string();
  std::ifstream meta_in(meta_path, std::ios::binary);
  if (!meta_in) throw IoError("cannot open checkpoint metadata: " + meta_path);
  std::stringstream ss;
  ss << meta_in.rdbuf();
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad checkpoint metadata " + meta_path + ": " + e.what());
  }
  ckpt.stage_chain = meta.at("stage_chain").get<std::vector<std::string>>();
  ckpt.epoch = meta.at("epoch").get<int>();
  ckpt.val_map = meta.at("val_map").get<double>();
  ckpt.seed = meta.at("seed").get<std::uint64_t>();
  return ckpt;
}

InitReport init_from_checkpoint(Model& model, const Checkpoint& checkpoint,
                                std::uint64_t fresh_seed) {
  InitReport report;
  std::mt19937_64 rng(fresh_seed);
  for (NamedTensor* t : model.parameters()) {
    auto it = checkpoint.params.find(t->name);
    if (it != checkpoint.params.end()) {
      if (it->second.shape != t->shape) {
        throw LoadError("checkpoint shape mismatch for parameter '" + t->name +
                        "'");
      }
      t->value = it->second.value;
      report.matched.push_back(t->name);
    } else {
      if (t->name.rfind("head.", 0) != 0) {
        throw LoadError("checkpoint is missing non-head parameter '" + t->name +
                        "'");
      }
      if (is_bias(t->name)) {
        std::fill(t->value.begin(), t->value.end(), 0.0f);
      } else {
        // Small head init so initial scores sit near sigma(0) = 0.5.
        fill_uniform(*t, 0.1f / std::sqrt(static_cast<float>(fan_in(*t))), rng);
      }
      report.unmatched.push_back(t->name);
    }
  }
  return report;
}

}  // namespace cxrlt::train
