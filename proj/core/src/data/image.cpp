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

#include "cxrlt/data/image.hpp"

#include <fstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "cxrlt/util/error.hpp"

namespace cxrlt::data {

ImageArray load_image_file(const std::string& path, int side,
                           const NormalizationSpec& norm) {
  if (side <= 0) throw ContractError("load_image: side must be positive");
  cv::Mat raw = cv::imread(path, cv::IMREAD_UNCHANGED);
  if (raw.empty()) {
    throw IoError("load_image: cannot read or decode " + path);
  }
  cv::Mat gray_or_rgb;
  if (raw.channels() == 1) {
    gray_or_rgb = raw;
  } else if (raw.channels() == 3) {
    cv::cvtColor(raw, gray_or_rgb, cv::COLOR_BGR2RGB);
  } else if (raw.channels() == 4) {
    cv::cvtColor(raw, gray_or_rgb, cv::COLOR_BGRA2RGB);
  } else {
    throw IoError("load_image: unsupported channel count in " + path);
  }

  cv::Mat as_float;
  double scale = 1.0 / 255.0;
  if (gray_or_rgb.depth() == CV_16U) scale = 1.0 / 65535.0;
  gray_or_rgb.convertTo(as_float, CV_32F, scale);

  cv::Mat resized;
  if (as_float.rows == side && as_float.cols == side) {
    resized = as_float;
  } else {
    cv::resize(as_float, resized, cv::Size(side, side), 0, 0, cv::INTER_LINEAR);
  }

  ImageArray out;
  out.side = side;
  out.values.resize(static_cast<size_t>(3) * side * side);
  const int channels = resized.channels();
  for (int y = 0; y < side; ++y) {
    const float* row = resized.ptr<float>(y);
    for (int x = 0; x < side; ++x) {
      for (int c = 0; c < 3; ++c) {
        float v = channels == 1 ? row[x] : row[x * 3 + c];
        out.values[(static_cast<size_t>(c) * side + y) * side + x] =
            (v - norm.mean) / norm.stddev;
      }
    }
  }
  return out;
}

ImageArray load_image(const SampleRecord& record, int side,
                      const NormalizationSpec& norm) {
  try {
    return load_image_file(record.image_ref, side, norm);
  } catch (const IoError&) {
    throw IoError("load_image: failed for record image_ref=" + record.image_ref);
  }
}

void write_pgm(const std::string& path, int width, int height,
               const std::vector<unsigned char>& pixels) {
  if (pixels.size() != static_cast<size_t>(width) * height) {
    throw ContractError("write_pgm: pixel buffer size mismatch");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_pgm: cannot open " + path);
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) throw IoError("write_pgm: short write to " + path);
}

}  // namespace cxrlt::data
