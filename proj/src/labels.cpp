// Copyright 2026 The pedtoolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pedtoolkit/labels.hpp"

#include <cstdio>
#include <sstream>

#include "pedtoolkit/error.hpp"

namespace pedtoolkit {

std::string format_yolo_line(const YoloLabel& label) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f", label.class_id, label.cx, label.cy,
                label.w, label.h);
  return buf;
}

std::string format_label_file(const std::vector<YoloLabel>& labels) {
  std::string out;
  for (const auto& l : labels) {
    out += format_yolo_line(l);
    out += '\n';
  }
  return out;
}

std::string format_detection_line(const DetectionLine& det) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f %.6f", det.class_id, det.confidence,
                det.cx, det.cy, det.w, det.h);
  return buf;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<double> parse_columns(std::string_view line, size_t expected) {
  std::istringstream in{std::string(line)};
  std::vector<double> cols;
  double v;
  while (in >> v) cols.push_back(v);
  if (cols.size() != expected) {
    throw Error(ErrorKind::InvalidArgument, "expected " + std::to_string(expected) +
                                                " columns in label line '" + std::string(line) +
                                                "'");
  }
  return cols;
}

}  // namespace

std::vector<YoloLabel> parse_label_file(std::string_view text) {
  std::vector<YoloLabel> out;
  for (auto line : split_lines(text)) {
    const auto c = parse_columns(line, 5);
    out.push_back({static_cast<int>(c[0]), c[1], c[2], c[3], c[4]});
  }
  return out;
}

std::vector<DetectionLine> parse_detection_file(std::string_view text) {
  std::vector<DetectionLine> out;
  for (auto line : split_lines(text)) {
    const auto c = parse_columns(line, 6);
    out.push_back({static_cast<int>(c[0]), c[1], c[2], c[3], c[4], c[5]});
  }
  return out;
}

Box label_to_box(const YoloLabel& label) {
  return {label.cx - label.w / 2.0, label.cy - label.h / 2.0, label.w, label.h};
}

}  // namespace pedtoolkit
