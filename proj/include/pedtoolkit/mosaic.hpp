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

#include <cstdint>
#include <span>
#include <vector>

#include <opencv2/core.hpp>

#include "pedtoolkit/geometry.hpp"

namespace pedtoolkit {

/// Parameters of one mosaic composition. The canvas is 2s x 2s and the four
/// inputs land in the quadrants around `center`, which lies in the middle
/// half of the canvas: [s/2, 3s/2] on each axis.
struct MosaicSpec {
  int size = 640;  // s
  double center_x = 640;
  double center_y = 640;
  uint64_t seed = 0;
  double min_box_side = 2.0;  // canvas pixels; smaller clipped boxes drop

  /// Spec with the center drawn uniformly from [s/2, 3s/2]^2 using `seed`.
  static MosaicSpec sampled(int size, uint64_t seed, double min_box_side = 2.0);
};

struct LabeledImage {
  cv::Mat image;                  // 8-bit BGR
  std::vector<YoloLabel> labels;  // normalized to this image
};

struct MosaicResult {
  cv::Mat image;                  // 2s x 2s, gray-114 where uncovered
  std::vector<YoloLabel> labels;  // normalized to the 2s canvas
};

/// Compose exactly four labeled images around the spec center. Each input is
/// scaled to fit s x s (aspect preserved), anchored at the center point and
/// cropped at the canvas edges; labels follow, clipped to the placed region.
/// Errors: WrongArity, InvalidArgument.
MosaicResult mosaic(std::span<const LabeledImage> inputs, const MosaicSpec& spec);

}  // namespace pedtoolkit
