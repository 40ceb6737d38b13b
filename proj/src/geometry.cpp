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

#include "pedtoolkit/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "pedtoolkit/error.hpp"

namespace pedtoolkit {

double iou(const Box& a, const Box& b) {
  // areas come from the same derived corners as the intersection, so
  // identical boxes give exactly 1 despite rounding
  const double ax1 = a.right(), ay1 = a.bottom();
  const double bx1 = b.right(), by1 = b.bottom();
  const double iw = std::min(ax1, bx1) - std::max(a.left, b.left);
  const double ih = std::min(ay1, by1) - std::max(a.top, b.top);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  const double uni = (ax1 - a.left) * (ay1 - a.top) + (bx1 - b.left) * (by1 - b.top) - inter;
  return uni > 0 ? inter / uni : 0.0;
}

LetterboxTransform letterbox_for(double src_w, double src_h, double dst) {
  if (src_w <= 0 || src_h <= 0 || dst <= 0) {
    throw Error(ErrorKind::InvalidArgument, "letterbox dimensions must be positive");
  }
  LetterboxTransform t;
  t.src_w = src_w;
  t.src_h = src_h;
  t.dst_w = dst;
  t.dst_h = dst;
  t.scale = std::min(dst / src_w, dst / src_h);
  t.pad_x = (dst - t.scale * src_w) / 2.0;
  t.pad_y = (dst - t.scale * src_h) / 2.0;
  return t;
}

std::optional<YoloLabel> try_box_to_yolo(const Box& b, const LetterboxTransform& t, int class_id) {
  const Box c = t.apply(b);
  const double x0 = std::clamp(c.left, 0.0, t.dst_w);
  const double x1 = std::clamp(c.right(), 0.0, t.dst_w);
  const double y0 = std::clamp(c.top, 0.0, t.dst_h);
  const double y1 = std::clamp(c.bottom(), 0.0, t.dst_h);
  if (x1 - x0 <= 0 || y1 - y0 <= 0) return std::nullopt;
  YoloLabel l;
  l.class_id = class_id;
  l.cx = std::clamp((x0 + x1) / 2.0 / t.dst_w, 0.0, 1.0);
  l.cy = std::clamp((y0 + y1) / 2.0 / t.dst_h, 0.0, 1.0);
  l.w = std::clamp((x1 - x0) / t.dst_w, 0.0, 1.0);
  l.h = std::clamp((y1 - y0) / t.dst_h, 0.0, 1.0);
  return l;
}

YoloLabel box_to_yolo(const Box& b, const LetterboxTransform& t, int class_id) {
  auto l = try_box_to_yolo(b, t, class_id);
  if (!l) throw Error(ErrorKind::DegenerateBox, "box clips to zero area on the canvas");
  return *l;
}

Box yolo_to_box(const YoloLabel& l, const LetterboxTransform& t) {
  const Box canvas{(l.cx - l.w / 2.0) * t.dst_w, (l.cy - l.h / 2.0) * t.dst_h, l.w * t.dst_w,
                   l.h * t.dst_h};
  return t.invert(canvas);
}

}  // namespace pedtoolkit
