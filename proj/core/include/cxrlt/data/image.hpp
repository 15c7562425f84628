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

#include <string>
#include <vector>

#include "cxrlt/data/table.hpp"

namespace cxrlt::data {

/// Square 3-channel float image in CHW layout. Grayscale sources are
/// replicated across channels, so channel planes may be identical.
struct ImageArray {
  int side = 0;
  std::vector<float> values;  // size 3 * side * side

  float at(int c, int y, int x) const {
    return values[(static_cast<size_t>(c) * side + y) * side + x];
  }
};

/// Per-channel affine standardization applied to [0,1] intensities:
/// out = (v - mean) / stddev.
struct NormalizationSpec {
  float mean = 0.5f;
  float stddev = 0.25f;
};

/// Decodes, bilinearly resizes to side x side and normalizes an image
/// file. Grayscale input is replicated to 3 channels. Unreadable or
/// corrupt files raise IoError carrying the path.
ImageArray load_image_file(const std::string& path, int side,
                           const NormalizationSpec& norm = {});

/// Same, resolving the path from a record; the error names image_ref.
ImageArray load_image(const SampleRecord& record, int side,
                      const NormalizationSpec& norm = {});

/// Writes an 8-bit grayscale PGM (P5). Used by tooling and tests to
/// produce corpora the loader can read back.
void write_pgm(const std::string& path, int width, int height,
               const std::vector<unsigned char>& pixels);

}  // namespace cxrlt::data
