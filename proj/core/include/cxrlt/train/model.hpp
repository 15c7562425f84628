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

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cxrlt/data/image.hpp"

namespace cxrlt::train {

/// A named parameter tensor with its gradient accumulator.
struct NamedTensor {
  std::string name;
  std::vector<int> shape;
  std::vector<float> value;
  std::vector<float> grad;

  size_t size() const { return value.size(); }
};

/// Behavioral contract for a backbone + classification head. The logit
/// width equals the registry label count for every input; head parameter
/// names start with "head." so generalist checkpoints can omit them.
class Model {
 public:
  virtual ~Model() = default;

  virtual int label_count() const = 0;
  virtual int input_side() const = 0;

  /// Forward pass; returns logits row-major batch x label_count and caches
  /// activations for the next backward() call.
  virtual std::vector<float> forward(const std::vector<data::ImageArray>& batch) = 0;

  /// Accumulates parameter gradients from dLoss/dlogits of the last
  /// forward batch.
  virtual void backward(const std::vector<float>& dlogits) = 0;

  /// Parameters in a stable order with stable names.
  virtual std::vector<NamedTensor*> parameters() = 0;
  std::vector<const NamedTensor*> parameters() const;

  void zero_grad();
};

/// Model construction recipe. `type` is "tiny_cnn" (small convolutional
/// test backbone) or "linear" (flattened linear probe).
struct ModelSpec {
  std::string type = "tiny_cnn";
  int input_side = 32;
  int channels = 8;
  int hidden = 32;
  int labels = 0;

  void validate() const;
};

/// Builds an uninitialized (all-zero) model; call init_random or
/// init_from_checkpoint before use.
std::unique_ptr<Model> make_model(const ModelSpec& spec);

/// Seeded parameter initialization: biases zero, weights uniform in
/// +/- 1/sqrt(fan_in). Identical seeds produce identical parameters.
void init_random(Model& model, std::uint64_t seed);

/// Trained parameters plus provenance. The stage chain lists every prior
/// stage in order, starting from the initialization source.
struct Checkpoint {
  std::map<std::string, NamedTensor> params;  // grads unused
  std::vector<std::string> stage_chain;
  int epoch = -1;
  double val_map = 0.0;
  std::uint64_t seed = 0;

  static Checkpoint from_model(const Model& model,
                               std::vector<std::string> stage_chain, int epoch,
                               double val_map, std::uint64_t seed);

  /// Directory layout: params.bin (binary parameter archive) +
  /// metadata.json (stage chain, epoch, seed, val mAP).
  void save(const std::string& dir) const;
  static Checkpoint load(const std::string& dir);
};

/// Result of applying a checkpoint: which model parameters were loaded and
/// which were freshly initialized.
struct InitReport {
  std::vector<std::string> matched;
  std::vector<std::string> unmatched;
};

/// Copies checkpoint parameters into the model wherever names match; a
/// shape mismatch on a matched name raises LoadError naming the parameter.
/// Unmatched parameters are allowed only under the "head." prefix
/// (generalist checkpoints) and are freshly initialized: zero bias, small
/// uniform weights scaled by fan-in, seeded by `fresh_seed`.
InitReport init_from_checkpoint(Model& model, const Checkpoint& checkpoint,
                                std::uint64_t fresh_seed = 0);

}  // namespace cxrlt::train
