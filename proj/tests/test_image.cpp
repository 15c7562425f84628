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

#include <cmath>

#include <doctest.h>

#include "cxrlt/data/image.hpp"
#include "cxrlt/util/error.hpp"
#include "support/temp_dir.hpp"

using namespace cxrlt;

TEST_SUITE("image") {

TEST_CASE("same-size load is the identity up to normalization") {
  testsupport::ScopedTempDir dir("image");
  std::vector<unsigned char> pixels(16 * 16);
  for (size_t i = 0; i < pixels.size(); ++i) {
    pixels[i] = static_cast<unsigned char>(i);
  }
  data::write_pgm(dir.file("x.pgm"), 16, 16, pixels);

  data::NormalizationSpec norm;  // mean 0.5, stddev 0.25
  auto img = data::load_image_file(dir.file("x.pgm"), 16, norm);
  REQUIRE(img.side == 16);
  REQUIRE(img.values.size() == 3u * 16 * 16);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      const float expected =
          (pixels[y * 16 + x] / 255.0f - norm.mean) / norm.stddev;
      CHECK(img.at(0, y, x) == doctest::Approx(expected).epsilon(1e-6));
      // Grayscale replicates across the 3 channels.
      CHECK(img.at(1, y, x) == img.at(0, y, x));
      CHECK(img.at(2, y, x) == img.at(0, y, x));
    }
  }
}

TEST_CASE("resizing a constant image keeps the constant") {
  testsupport::ScopedTempDir dir("image");
  std::vector<unsigned char> pixels(64 * 64, 255);
  data::write_pgm(dir.file("c.pgm"), 64, 64, pixels);
  auto img = data::load_image_file(dir.file("c.pgm"), 32);
  // 255 -> 1.0 -> (1.0 - 0.5) / 0.25 = 2.0 under the default spec.
  for (float v : img.values) CHECK(v == doctest::Approx(2.0f).epsilon(1e-6));
}

TEST_CASE("normalization is the affine map (v - mean) / stddev") {
  testsupport::ScopedTempDir dir("image");
  std::vector<unsigned char> pixels(8 * 8, 128);
  data::write_pgm(dir.file("m.pgm"), 8, 8, pixels);
  data::NormalizationSpec norm{0.25f, 0.5f};
  auto img = data::load_image_file(dir.file("m.pgm"), 8, norm);
  const float expected = (128.0f / 255.0f - 0.25f) / 0.5f;
  CHECK(img.at(0, 3, 3) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("unreadable files raise IoError naming the path") {
  CHECK_THROWS_WITH_AS(data::load_image_file("/nonexistent/zz.png", 32),
                       doctest::Contains("zz.png"), IoError);

  data::SampleRecord rec;
  rec.image_ref = "/nonexistent/ref.png";
  CHECK_THROWS_WITH_AS(data::load_image(rec, 32),
                       doctest::Contains("ref.png"), IoError);
}

}  // TEST_SUITE
