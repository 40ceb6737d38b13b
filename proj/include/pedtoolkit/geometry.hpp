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

#include <optional>

namespace pedtoolkit {

/// Axis-aligned box, left/top corner plus extent, continuous pixel coordinates.
struct Box {
  double left = 0;
  double top = 0;
  double width = 0;
  double height = 0;

  double right() const { return left + width; }
  double bottom() const { return top + height; }
  double area() const { return width * height; }
  bool empty() const { return width <= 0 || height <= 0; }
};

/// Intersection over union. 0 when the union is empty.
double iou(const Box& a, const Box& b);

/// Aspect-preserving resize onto a padded canvas: canvas = source * scale + pad.
struct LetterboxTransform {
  double scale = 1;
  double pad_x = 0;
  double pad_y = 0;
  double src_w = 0;
  double src_h = 0;
  double dst_w = 0;
  double dst_h = 0;

  Box apply(const Box& b) const {
    return {b.left * scale + pad_x, b.top * scale + pad_y, b.width * scale, b.height * scale};
  }
  Box invert(const Box& b) const {
    return {(b.left - pad_x) / scale, (b.top - pad_y) / scale, b.width / scale, b.height / scale};
  }
};

/// Centered letterbox of a src_w x src_h frame onto a dst x dst canvas.
LetterboxTransform letterbox_for(double src_w, double src_h, double dst);

/// One object in the YOLO label convention: center + extent, normalized to
/// the image dimensions. All four coordinates lie in [0, 1].
struct YoloLabel {
  int class_id = 0;
  double cx = 0;
  double cy = 0;
  double w = 0;
  double h = 0;
};

/// Source-frame box -> normalized label on the letterboxed canvas. The box is
/// clipped to the canvas; throws Error{DegenerateBox} when nothing remains.
YoloLabel box_to_yolo(const Box& b, const LetterboxTransform& t, int class_id);

/// Non-throwing variant; nullopt when the clipped box is empty.
std::optional<YoloLabel> try_box_to_yolo(const Box& b, const LetterboxTransform& t, int class_id);

/// Normalized label -> source-frame box (exact inverse for unclipped boxes).
Box yolo_to_box(const YoloLabel& l, const LetterboxTransform& t);

}  // namespace pedtoolkit
