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

#include "cxrlt/report/plots.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "cxrlt/util/error.hpp"

namespace cxrlt::report {

namespace {

const cv::Scalar kBackground(255, 255, 255);
const cv::Scalar kAxis(40, 40, 40);
const cv::Scalar kHeadColor(180, 119, 31);    // BGR
const cv::Scalar kMediumColor(14, 127, 255);
const cv::Scalar kTailColor(44, 160, 44);
const cv::Scalar kNegColor(40, 39, 214);
const cv::Scalar kMarker(128, 128, 128);

void write_image(const cv::Mat& canvas, const std::string& path) {
  if (!cv::imwrite(path, canvas)) {
    throw IoError("plot: cannot write image " + path);
  }
}

}  // namespace

void plot_distribution(const labels::LabelRegistry& registry,
                       const std::string& dataset,
                       const labels::CategoryThresholds& thresholds,
                       const std::string& path) {
  thresholds.validate();
  const auto& coverage = registry.coverage(dataset);  // LookupError if unknown
  std::vector<std::pair<std::string, std::int64_t>> bars;
  for (int i : coverage) {
    bars.emplace_back(registry.labels()[i], registry.positive_count(dataset, i));
  }
  std::stable_sort(bars.begin(), bars.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  const int width = std::max(480, 40 * static_cast<int>(bars.size()) + 120);
  const int height = 540;
  const int left = 80, bottom = 160, top = 40;
  cv::Mat canvas(height, width, CV_8UC3, kBackground);

  std::int64_t max_count = 1;
  for (const auto& [_, n] : bars) max_count = std::max(max_count, n);

  const int plot_h = height - top - bottom;
  const int bar_w = std::max(8, (width - left - 40) / std::max<int>(1, bars.size()) - 8);
  auto y_of = [&](std::int64_t n) {
    return top + plot_h -
           static_cast<int>(std::llround(static_cast<double>(n) /
                                         static_cast<double>(max_count) * plot_h));
  };

  for (size_t i = 0; i < bars.size(); ++i) {
    const auto& [name, count] = bars[i];
    cv::Scalar color = kTailColor;
    if (count > thresholds.head_min) {
      color = kHeadColor;
    } else if (count >= thresholds.medium_min) {
      color = kMediumColor;
    }
    const int x = left + static_cast<int>(i) * (bar_w + 8);
    cv::rectangle(canvas, cv::Point(x, y_of(count)),
                  cv::Point(x + bar_w, top + plot_h), color, cv::FILLED);
    cv::putText(canvas, name, cv::Point(x + bar_w / 2 - 4, top + plot_h + 14),
                cv::FONT_HERSHEY_PLAIN, 0.8, kAxis, 1, cv::LINE_8);
  }

  // Threshold markers.
  for (std::int64_t mark : {thresholds.head_min, thresholds.medium_min}) {
    if (mark <= max_count) {
      cv::line(canvas, cv::Point(left, y_of(mark)),
               cv::Point(width - 20, y_of(mark)), kMarker, 1, cv::LINE_8);
      cv::putText(canvas, std::to_string(mark), cv::Point(4, y_of(mark) + 4),
                  cv::FONT_HERSHEY_PLAIN, 0.9, kAxis, 1, cv::LINE_8);
    }
  }
  cv::line(canvas, cv::Point(left, top), cv::Point(left, top + plot_h), kAxis, 1);
  cv::line(canvas, cv::Point(left, top + plot_h), cv::Point(width - 20, top + plot_h),
           kAxis, 1);
  cv::putText(canvas, dataset + " positive counts", cv::Point(left, 24),
              cv::FONT_HERSHEY_PLAIN, 1.2, kAxis, 1, cv::LINE_8);

  write_image(canvas, path);
}

std::map<std::string, double> category_deltas(const eval::EvalReport& base,
                                              const eval::EvalReport& variant) {
  if (base.registry_ref != variant.registry_ref) {
    throw IncompatibilityError("plot_delta: reports bound to different registries");
  }
  std::map<std::string, double> deltas;
  for (const auto& [group, mean] : variant.category_means) {
    auto it = base.category_means.find(group);
    if (it == base.category_means.end()) {
      throw IncompatibilityError("plot_delta: group '" + group +
                                 "' missing from base report");
    }
    deltas[group] = mean - it->second;
  }
  for (const auto& [group, _] : base.category_means) {
    if (!variant.category_means.count(group)) {
      throw IncompatibilityError("plot_delta: group '" + group +
                                 "' missing from variant report");
    }
  }
  return deltas;
}

void plot_delta(const eval::EvalReport& base, const eval::EvalReport& variant,
                const std::string& path) {
  auto deltas = category_deltas(base, variant);
  const char* const order[] = {"All", "Head", "Medium", "Tail", "Tail-U"};
  std::vector<std::pair<std::string, double>> bars;
  for (const char* g : order) {
    auto it = deltas.find(g);
    if (it != deltas.end()) bars.emplace_back(g, it->second);
  }

  const int width = 520, height = 420;
  const int left = 70, top = 40, bottom = 60;
  cv::Mat canvas(height, width, CV_8UC3, kBackground);
  double max_abs = 1e-9;
  for (const auto& [_, d] : bars) max_abs = std::max(max_abs, std::abs(d));
  const int plot_h = height - top - bottom;
  const int zero_y = top + plot_h / 2;
  auto y_of = [&](double d) {
    return zero_y - static_cast<int>(std::llround(d / max_abs * (plot_h / 2.0)));
  };
  const int bar_w = (width - left - 40) / std::max<int>(1, bars.size()) - 16;
  for (size_t i = 0; i < bars.size(); ++i) {
    const auto& [name, d] = bars[i];
    const int x = left + static_cast<int>(i) * (bar_w + 16);
    const cv::Scalar color = d >= 0 ? kHeadColor : kNegColor;
    cv::rectangle(canvas, cv::Point(x, std::min(zero_y, y_of(d))),
                  cv::Point(x + bar_w, std::max(zero_y, y_of(d))), color,
                  cv::FILLED);
    cv::putText(canvas, name, cv::Point(x, height - 30), cv::FONT_HERSHEY_PLAIN,
                1.0, kAxis, 1, cv::LINE_8);
    char value[32];
    std::snprintf(value, sizeof(value), "%+.4f", d);
    cv::putText(canvas, value, cv::Point(x, y_of(d) + (d >= 0 ? -6 : 14)),
                cv::FONT_HERSHEY_PLAIN, 0.8, kAxis, 1, cv::LINE_8);
  }
  cv::line(canvas, cv::Point(left - 10, zero_y), cv::Point(width - 20, zero_y),
           kAxis, 1);
  cv::putText(canvas, "mean AP delta by category", cv::Point(left, 24),
              cv::FONT_HERSHEY_PLAIN, 1.2, kAxis, 1, cv::LINE_8);
  write_image(canvas, path);
}

}  // namespace cxrlt::report
