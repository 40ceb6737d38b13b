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

#include "pedtoolkit/mosaic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <opencv2/imgproc.hpp>

#include "pedtoolkit/error.hpp"

namespace pedtoolkit {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

MosaicSpec MosaicSpec::sampled(int size, uint64_t seed, double min_box_side) {
  std::mt19937_64 rng(seed);
  MosaicSpec spec;
  spec.size = size;
  spec.seed = seed;
  spec.min_box_side = min_box_side;
  spec.center_x = size / 2.0 + uniform01(rng) * size;
  spec.center_y = size / 2.0 + uniform01(rng) * size;
  return spec;
}

MosaicResult mosaic(std::span<const LabeledImage> inputs, const MosaicSpec& spec) {
  if (inputs.size() != 4) {
    throw Error(ErrorKind::WrongArity, "mosaic takes exactly 4 inputs, got " +
                                           std::to_string(inputs.size()));
  }
  const int s = spec.size;
  if (s <= 0) throw Error(ErrorKind::InvalidArgument, "mosaic size must be positive");
  if (spec.center_x < s / 2.0 || spec.center_x > 1.5 * s || spec.center_y < s / 2.0 ||
      spec.center_y > 1.5 * s) {
    throw Error(ErrorKind::InvalidArgument, "mosaic center outside [s/2, 3s/2]^2");
  }
  const int canvas_size = 2 * s;
  const int cx = static_cast<int>(std::lround(spec.center_x));
  const int cy = static_cast<int>(std::lround(spec.center_y));

  MosaicResult result;
  result.image = cv::Mat(canvas_size, canvas_size, CV_8UC3, cv::Scalar(114, 114, 114));

  for (size_t k = 0; k < 4; ++k) {
    const auto& input = inputs[k];
    if (input.image.empty() || input.image.type() != CV_8UC3) {
      throw Error(ErrorKind::InvalidArgument, "mosaic input " + std::to_string(k) +
                                                  " is not an 8-bit BGR image");
    }
    const double r = std::min(static_cast<double>(s) / input.image.cols,
                              static_cast<double>(s) / input.image.rows);
    const int w = std::max(1, static_cast<int>(std::lround(input.image.cols * r)));
    const int h = std::max(1, static_cast<int>(std::lround(input.image.rows * r)));
    cv::Mat scaled;
    if (w == input.image.cols && h == input.image.rows) {
      scaled = input.image;
    } else {
      cv::resize(input.image, scaled, cv::Size(w, h), 0, 0, cv::INTER_LINEAR);
    }

    // canvas region [xa1, xa2) x [ya1, ya2) and the matching source crop,
    // anchored corner-to-corner at the center point
    int xa1, ya1, xa2, ya2, xb1, yb1;
    switch (k) {
      case 0:  // top left
        xa1 = std::max(cx - w, 0); ya1 = std::max(cy - h, 0); xa2 = cx; ya2 = cy;
        xb1 = w - (xa2 - xa1); yb1 = h - (ya2 - ya1);
        break;
      case 1:  // top right
        xa1 = cx; ya1 = std::max(cy - h, 0); xa2 = std::min(cx + w, canvas_size); ya2 = cy;
        xb1 = 0; yb1 = h - (ya2 - ya1);
        break;
      case 2:  // bottom left
        xa1 = std::max(cx - w, 0); ya1 = cy; xa2 = cx; ya2 = std::min(cy + h, canvas_size);
        xb1 = w - (xa2 - xa1); yb1 = 0;
        break;
      default:  // bottom right
        xa1 = cx; ya1 = cy; xa2 = std::min(cx + w, canvas_size); ya2 = std::min(cy + h, canvas_size);
        xb1 = 0; yb1 = 0;
        break;
    }
    const int rw = xa2 - xa1, rh = ya2 - ya1;
    if (rw <= 0 || rh <= 0) continue;  // quadrant collapsed against a canvas edge
    scaled(cv::Rect(xb1, yb1, rw, rh)).copyTo(result.image(cv::Rect(xa1, ya1, rw, rh)));

    const double pad_x = xa1 - xb1;
    const double pad_y = ya1 - yb1;
    for (const auto& label : input.labels) {
      // normalized on the input -> pixels on the scaled image -> canvas
      const double bw = label.w * w, bh = label.h * h;
      const double left = label.cx * w - bw / 2.0 + pad_x;
      const double top = label.cy * h - bh / 2.0 + pad_y;
      const double x0 = std::clamp(left, static_cast<double>(xa1), static_cast<double>(xa2));
      const double x1 = std::clamp(left + bw, static_cast<double>(xa1), static_cast<double>(xa2));
      const double y0 = std::clamp(top, static_cast<double>(ya1), static_cast<double>(ya2));
      const double y1 = std::clamp(top + bh, static_cast<double>(ya1), static_cast<double>(ya2));
      if (x1 - x0 < spec.min_box_side || y1 - y0 < spec.min_box_side) continue;
      YoloLabel out;
      out.class_id = label.class_id;
      out.cx = std::clamp((x0 + x1) / 2.0 / canvas_size, 0.0, 1.0);
      out.cy = std::clamp((y0 + y1) / 2.0 / canvas_size, 0.0, 1.0);
      out.w = std::clamp((x1 - x0) / canvas_size, 0.0, 1.0);
      out.h = std::clamp((y1 - y0) / canvas_size, 0.0, 1.0);
      result.labels.push_back(out);
    }
  }
  return result;
}

}  // namespace pedtoolkit
