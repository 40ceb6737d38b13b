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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pedtoolkit/geometry.hpp"

namespace pedtoolkit {

// YOLO label files: one object per line, `class cx cy w h`, six decimal
// places, space separated, '\n' line endings, no trailing whitespace.
// Detection files carry an extra confidence column after the class.

std::string format_yolo_line(const YoloLabel& label);
std::string format_label_file(const std::vector<YoloLabel>& labels);
std::vector<YoloLabel> parse_label_file(std::string_view text);

/// One line of a detection file: `class confidence cx cy w h` (normalized).
struct DetectionLine {
  int class_id = 0;
  double confidence = 0;
  double cx = 0;
  double cy = 0;
  double w = 0;
  double h = 0;
};

std::string format_detection_line(const DetectionLine& det);
std::vector<DetectionLine> parse_detection_file(std::string_view text);

/// Center-format normalized label -> corner-format box in normalized units.
Box label_to_box(const YoloLabel& label);

}  // namespace pedtoolkit
