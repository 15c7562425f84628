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

#include "support/toy_corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <json.hpp>

#include "cxrlt/data/image.hpp"
#include "cxrlt/util/csv.hpp"

namespace fs = std::filesystem;

namespace cxrlt::testsupport {

namespace {

// Disc centers per label on the 64x64 canvas.
void label_center(int label, int* cx, int* cy) {
  *cx = (label % 4) * 16 + 8;
  *cy = (label / 4) * 32 + 16;
}

void render_image(const std::string& path, const std::set<int>& positives,
                  std::mt19937_64& rng) {
  std::vector<unsigned char> pixels(kToyImageSide * kToyImageSide);
  for (auto& p : pixels) {
    p = static_cast<unsigned char>(90 + rng() % 41);  // flat noise 90..130
  }
  for (int label : positives) {
    int cx = 0, cy = 0;
    label_center(label, &cx, &cy);
    for (int y = cy - 5; y <= cy + 5; ++y) {
      for (int x = cx - 5; x <= cx + 5; ++x) {
        if (x < 0 || y < 0 || x >= kToyImageSide || y >= kToyImageSide) continue;
        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) > 25) continue;
        const int lifted = pixels[y * kToyImageSide + x] + 70;
        pixels[y * kToyImageSide + x] =
            static_cast<unsigned char>(std::min(lifted, 255));
      }
    }
  }
  data::write_pgm(path, kToyImageSide, kToyImageSide, pixels);
}

// Deterministically picks `count` distinct rows out of `total`.
std::set<int> pick_rows(int total, int count, std::mt19937_64& rng) {
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }
  return std::set<int>(order.begin(), order.begin() + count);
}

struct SourceSpec {
  std::string name;
  std::string prefix;
  int rows;
  std::vector<int> labels;
  std::vector<int> counts;
  bool sprinkle_unknowns;
};

std::string write_source(const std::string& root, const SourceSpec& spec,
                         std::mt19937_64& rng) {
  std::vector<std::set<int>> row_positives(spec.rows);
  for (size_t k = 0; k < spec.labels.size(); ++k) {
    for (int row : pick_rows(spec.rows, spec.counts[k], rng)) {
      row_positives[row].insert(spec.labels[k]);
    }
  }

  std::vector<std::vector<std::string>> manifest;
  std::vector<std::string> header = {"image_path", "patient_id", "view"};
  for (int label : spec.labels) header.push_back("L" + std::to_string(label));
  manifest.push_back(std::move(header));

  for (int row = 0; row < spec.rows; ++row) {
    const std::string file = spec.prefix + std::to_string(row) + ".pgm";
    render_image((fs::path(root) / "images" / file).string(),
                 row_positives[row], rng);
    std::vector<std::string> line = {"images/" + file,
                                     spec.prefix + "p" + std::to_string(row),
                                     "frontal"};
    size_t k = 0;
    for (int label : spec.labels) {
      if (row_positives[row].count(label)) {
        line.push_back("1");
      } else if (spec.sprinkle_unknowns && (row * 31 + label * 17) % 23 == 0) {
        line.push_back("");  // unknown cell
      } else {
        line.push_back("0");
      }
      ++k;
    }
    manifest.push_back(std::move(line));
  }
  const std::string path =
      (fs::path(root) / (spec.name + ".csv")).string();
  csv::write_file(path, manifest);
  return path;
}

}  // namespace

ToyCorpus generate_toy_corpus(const std::string& root, std::uint64_t seed) {
  fs::create_directories(fs::path(root) / "images");
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 1);

  ToyCorpus corpus;
  corpus.root = fs::absolute(root).string();
  corpus.target_manifest = write_source(
      corpus.root,
      {"target", "t", 1000, {0, 1, 2, 3, 4, 5, 6, 7},
       {400, 400, 100, 100, 40, 40, 16, 16}, true},
      rng);
  corpus.source_a_manifest = write_source(
      corpus.root, {"sourceA", "a", 400, {0, 2, 4}, {160, 40, 16}, false}, rng);
  corpus.source_b_manifest = write_source(
      corpus.root, {"sourceB", "b", 400, {1, 3, 5}, {160, 40, 16}, false}, rng);
  corpus.source_c_manifest = write_source(
      corpus.root,
      {"sourceC", "c", 400, {0, 1, 4, 5}, {120, 120, 12, 12}, false}, rng);
  return corpus;
}

std::string toy_pipeline_config(const ToyCorpus& corpus,
                                const std::string& out_dir,
                                std::uint64_t seed) {
  using nlohmann::json;
  json stages = json::array();
  auto stage = [&](const std::string& name, const std::string& train,
                   const std::string& val, const std::string& init,
                   int epochs) {
    stages.push_back({{"name", name},
                      {"train", train},
                      {"val", val},
                      {"init", init},
                      {"epochs", epochs},
                      {"base_lr", 1e-3},
                      {"decay_every", 2},
                      {"decay_factor", 0.5},
                      {"batch_size", 32}});
  };
  stage("pretrain", "joint/train", "joint/val", "random", 4);
  stage("finetune", "target/train", "target/val", "stage:pretrain", 3);
  stage("baseline", "target/train", "target/val", "random", 3);

  json doc = {
      {"seed", seed},
      {"out_dir", out_dir},
      {"datasets",
       {{"target", {{"manifest", corpus.target_manifest}}},
        {"sourceA", {{"manifest", corpus.source_a_manifest}}},
        {"sourceB", {{"manifest", corpus.source_b_manifest}}},
        {"sourceC", {{"manifest", corpus.source_c_manifest}}}}},
      {"eval",
       {{"dataset", "target"},
        {"train", "target/train"},
        {"test", "target/test"},
        {"head_min", 200},
        {"medium_min", 50}}},
      {"splits",
       json::array(
           {{{"name", "joint"},
             {"datasets", {"sourceA", "sourceB", "sourceC"}},
             {"ratios", json::array({json::array({"train", 0.9}),
                                     json::array({"val", 0.1})})}},
            {{"name", "target"},
             {"datasets", {"target"}},
             {"ratios", json::array({json::array({"train", 0.8}),
                                     json::array({"val", 0.1}),
                                     json::array({"test", 0.1})})}}})},
      {"model",
       {{"type", "tiny_cnn"}, {"input_side", 32}, {"channels", 8},
        {"hidden", 32}}},
      {"stages", stages},
      {"ensemble", {{"members", {"finetune", "baseline"}}}},
      {"delta", {{"base", "baseline"}, {"variant", "finetune"}}},
  };
  return doc.dump(2) + "\n";
}

}  // namespace cxrlt::testsupport
