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

#include <algorithm>
#include <cmath>

#include "cxrlt/train/model.hpp"
#include "cxrlt/util/error.hpp"

namespace cxrlt::train {

namespace {

NamedTensor make_tensor(std::string name, std::vector<int> shape) {
  NamedTensor t;
  t.name = std::move(name);
  t.shape = std::move(shape);
  size_t total = 1;
  for (int d : t.shape) total *= static_cast<size_t>(d);
  t.value.assign(total, 0.0f);
  t.grad.assign(total, 0.0f);
  return t;
}

void check_batch(const std::vector<data::ImageArray>& batch, int side) {
  if (batch.empty()) throw ContractError("forward: empty batch");
  for (const auto& img : batch) {
    if (img.side != side ||
        img.values.size() != static_cast<size_t>(3) * side * side) {
      throw ContractError("forward: image side does not match model input");
    }
  }
}

/// Flattened linear probe: logits = W x + b over the raw 3*s*s input.
class LinearProbe final : public Model {
 public:
  explicit LinearProbe(const ModelSpec& spec)
      : side_(spec.input_side),
        labels_(spec.labels),
        weight_(make_tensor("head.weight", {spec.labels, 3 * side_ * side_})),
        bias_(make_tensor("head.bias", {spec.labels})) {}

  int label_count() const override { return labels_; }
  int input_side() const override { return side_; }

  std::vector<float> forward(const std::vector<data::ImageArray>& batch) override {
    check_batch(batch, side_);
    const int in = 3 * side_ * side_;
    input_.clear();
    for (const auto& img : batch) {
      input_.insert(input_.end(), img.values.begin(), img.values.end());
    }
    batch_ = batch.size();
    std::vector<float> logits(batch_ * labels_);
    for (size_t n = 0; n < batch_; ++n) {
      const float* x = input_.data() + n * in;
      for (int l = 0; l < labels_; ++l) {
        const float* w = weight_.value.data() + static_cast<size_t>(l) * in;
        double acc = bias_.value[l];
        for (int i = 0; i < in; ++i) acc += static_cast<double>(w[i]) * x[i];
        logits[n * labels_ + l] = static_cast<float>(acc);
      }
    }
    return logits;
  }

  void backward(const std::vector<float>& dlogits) override {
    const int in = 3 * side_ * side_;
    if (dlogits.size() != batch_ * static_cast<size_t>(labels_)) {
      throw ContractError("backward: dlogits shape mismatch");
    }
    for (size_t n = 0; n < batch_; ++n) {
      const float* x = input_.data() + n * in;
      for (int l = 0; l < labels_; ++l) {
        const float d = dlogits[n * labels_ + l];
        if (d == 0.0f) continue;
        bias_.grad[l] += d;
        float* gw = weight_.grad.data() + static_cast<size_t>(l) * in;
        for (int i = 0; i < in; ++i) gw[i] += d * x[i];
      }
    }
  }

  std::vector<NamedTensor*> parameters() override { return {&weight_, &bias_}; }

 private:
  int side_;
  int labels_;
  NamedTensor weight_;
  NamedTensor bias_;
  std::vector<float> input_;
  size_t batch_ = 0;
};

/// Small convolutional test backbone:
///   conv 3x3 stride 2 pad 1 (3 -> C) -> ReLU -> avg pool to 4x4 ->
///   fc (C*16 -> H) -> ReLU -> head (H -> L).
class TinyConvNet final : public Model {
 public:
  explicit TinyConvNet(const ModelSpec& spec)
      : side_(spec.input_side),
        conv_side_(spec.input_side / 2),
        pool_window_(conv_side_ / 4),
        channels_(spec.channels),
        hidden_(spec.hidden),
        labels_(spec.labels),
        conv_w_(make_tensor("conv1.weight", {spec.channels, 3, 3, 3})),
        conv_b_(make_tensor("conv1.bias", {spec.channels})),
        fc_w_(make_tensor("fc1.weight", {spec.hidden, spec.channels * 16})),
        fc_b_(make_tensor("fc1.bias", {spec.hidden})),
        head_w_(make_tensor("head.weight", {spec.labels, spec.hidden})),
        head_b_(make_tensor("head.bias", {spec.labels})) {}

  int label_count() const override { return labels_; }
  int input_side() const override { return side_; }

  std::vector<float> forward(const std::vector<data::ImageArray>& batch) override {
    check_batch(batch, side_);
    batch_ = batch.size();
    const int cs = conv_side_;
    const size_t conv_plane = static_cast<size_t>(cs) * cs;
    const size_t conv_size = static_cast<size_t>(channels_) * conv_plane;
    const int pooled_size = channels_ * 16;

    input_.clear();
    for (const auto& img : batch) {
      input_.insert(input_.end(), img.values.begin(), img.values.end());
    }
    conv_out_.assign(batch_ * conv_size, 0.0f);   // post-ReLU
    pooled_.assign(batch_ * pooled_size, 0.0f);
    hidden_out_.assign(batch_ * hidden_, 0.0f);   // post-ReLU

    std::vector<float> logits(batch_ * labels_);
    const size_t in_plane = static_cast<size_t>(side_) * side_;
    for (size_t n = 0; n < batch_; ++n) {
      const float* x = input_.data() + n * 3 * in_plane;
      float* conv = conv_out_.data() + n * conv_size;
      for (int oc = 0; oc < channels_; ++oc) {
        const float* w = conv_w_.value.data() + static_cast<size_t>(oc) * 27;
        for (int oy = 0; oy < cs; ++oy) {
          for (int ox = 0; ox < cs; ++ox) {
            double acc = conv_b_.value[oc];
            for (int ic = 0; ic < 3; ++ic) {
              for (int ky = 0; ky < 3; ++ky) {
                const int iy = 2 * oy + ky - 1;
                if (iy < 0 || iy >= side_) continue;
                for (int kx = 0; kx < 3; ++kx) {
                  const int ix = 2 * ox + kx - 1;
                  if (ix < 0 || ix >= side_) continue;
                  acc += static_cast<double>(w[(ic * 3 + ky) * 3 + kx]) *
                         x[ic * in_plane + static_cast<size_t>(iy) * side_ + ix];
                }
              }
            }
            conv[oc * conv_plane + static_cast<size_t>(oy) * cs + ox] =
                acc > 0 ? static_cast<float>(acc) : 0.0f;
          }
        }
      }

      // Average pool each channel to a 4x4 grid.
      float* pooled = pooled_.data() + n * pooled_size;
      const float inv_window =
          1.0f / static_cast<float>(pool_window_ * pool_window_);
      for (int c = 0; c < channels_; ++c) {
        for (int py = 0; py < 4; ++py) {
          for (int px = 0; px < 4; ++px) {
            double acc = 0.0;
            for (int dy = 0; dy < pool_window_; ++dy) {
              for (int dx = 0; dx < pool_window_; ++dx) {
                acc += conv[c * conv_plane +
                            static_cast<size_t>(py * pool_window_ + dy) * cs +
                            px * pool_window_ + dx];
              }
            }
            pooled[(c * 4 + py) * 4 + px] = static_cast<float>(acc) * inv_window;
          }
        }
      }

      float* hid = hidden_out_.data() + n * hidden_;
      for (int h = 0; h < hidden_; ++h) {
        const float* w = fc_w_.value.data() + static_cast<size_t>(h) * pooled_size;
        double acc = fc_b_.value[h];
        for (int i = 0; i < pooled_size; ++i) {
          acc += static_cast<double>(w[i]) * pooled[i];
        }
        hid[h] = acc > 0 ? static_cast<float>(acc) : 0.0f;
      }

      for (int l = 0; l < labels_; ++l) {
        const float* w = head_w_.value.data() + static_cast<size_t>(l) * hidden_;
        double acc = head_b_.value[l];
        for (int h = 0; h < hidden_; ++h) {
          acc += static_cast<double>(w[h]) * hid[h];
        }
        logits[n * labels_ + l] = static_cast<float>(acc);
      }
    }
    return logits;
  }

  void backward(const std::vector<float>& dlogits) override {
    if (dlogits.size() != batch_ * static_cast<size_t>(labels_)) {
      throw ContractError("backward: dlogits shape mismatch");
    }
    const int cs = conv_side_;
    const size_t conv_plane = static_cast<size_t>(cs) * cs;
    const size_t conv_size = static_cast<size_t>(channels_) * conv_plane;
    const int pooled_size = channels_ * 16;
    const size_t in_plane = static_cast<size_t>(side_) * side_;
    const float inv_window =
        1.0f / static_cast<float>(pool_window_ * pool_window_);

    std::vector<float> d_hidden(hidden_);
    std::vector<float> d_pooled(pooled_size);
    for (size_t n = 0; n < batch_; ++n) {
      const float* hid = hidden_out_.data() + n * hidden_;
      const float* pooled = pooled_.data() + n * pooled_size;
      const float* conv = conv_out_.data() + n * conv_size;
      const float* x = input_.data() + n * 3 * in_plane;

      // Head.
      std::fill(d_hidden.begin(), d_hidden.end(), 0.0f);
      for (int l = 0; l < labels_; ++l) {
        const float d = dlogits[n * labels_ + l];
        if (d == 0.0f) continue;
        head_b_.grad[l] += d;
        const float* w = head_w_.value.data() + static_cast<size_t>(l) * hidden_;
        float* gw = head_w_.grad.data() + static_cast<size_t>(l) * hidden_;
        for (int h = 0; h < hidden_; ++h) {
          gw[h] += d * hid[h];
          d_hidden[h] += d * w[h];
        }
      }

      // FC with ReLU gate.
      std::fill(d_pooled.begin(), d_pooled.end(), 0.0f);
      for (int h = 0; h < hidden_; ++h) {
        if (hid[h] <= 0.0f) continue;  // ReLU off
        const float d = d_hidden[h];
        if (d == 0.0f) continue;
        fc_b_.grad[h] += d;
        const float* w = fc_w_.value.data() + static_cast<size_t>(h) * pooled_size;
        float* gw = fc_w_.grad.data() + static_cast<size_t>(h) * pooled_size;
        for (int i = 0; i < pooled_size; ++i) {
          gw[i] += d * pooled[i];
          d_pooled[i] += d * w[i];
        }
      }

      // Pool spreads the gradient uniformly; conv ReLU gates it. Input
      // gradients are not needed (first layer).
      for (int c = 0; c < channels_; ++c) {
        for (int py = 0; py < 4; ++py) {
          for (int px = 0; px < 4; ++px) {
            const float d_pool = d_pooled[(c * 4 + py) * 4 + px] * inv_window;
            if (d_pool == 0.0f) continue;
            for (int dy = 0; dy < pool_window_; ++dy) {
              for (int dx = 0; dx < pool_window_; ++dx) {
                const int oy = py * pool_window_ + dy;
                const int ox = px * pool_window_ + dx;
                const size_t ci =
                    c * conv_plane + static_cast<size_t>(oy) * cs + ox;
                if (conv[ci] <= 0.0f) continue;
                conv_b_.grad[c] += d_pool;
                float* gw = conv_w_.grad.data() + static_cast<size_t>(c) * 27;
                for (int ic = 0; ic < 3; ++ic) {
                  for (int ky = 0; ky < 3; ++ky) {
                    const int iy = 2 * oy + ky - 1;
                    if (iy < 0 || iy >= side_) continue;
                    for (int kx = 0; kx < 3; ++kx) {
                      const int ix = 2 * ox + kx - 1;
                      if (ix < 0 || ix >= side_) continue;
                      gw[(ic * 3 + ky) * 3 + kx] +=
                          d_pool *
                          x[ic * in_plane + static_cast<size_t>(iy) * side_ + ix];
                    }
                  }
                }
              }
            }
          }
        }
      }
    }
  }

  std::vector<NamedTensor*> parameters() override {
    return {&conv_w_, &conv_b_, &fc_w_, &fc_b_, &head_w_, &head_b_};
  }

 private:
  int side_;
  int conv_side_;
  int pool_window_;
  int channels_;
  int hidden_;
  int labels_;
  NamedTensor conv_w_, conv_b_, fc_w_, fc_b_, head_w_, head_b_;
  std::vector<float> input_, conv_out_, pooled_, hidden_out_;
  size_t batch_ = 0;
};

}  // namespace

std::unique_ptr<Model> make_model(const ModelSpec& spec) {
  spec.validate();
  if (spec.type == "linear") return std::make_unique<LinearProbe>(spec);
  return std::make_unique<TinyConvNet>(spec);
}

}  // namespace cxrlt::train
