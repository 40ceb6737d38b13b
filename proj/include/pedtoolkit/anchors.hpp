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

namespace pedtoolkit {

/// A (width, height) pair: a dataset box dimension or a clustered anchor.
struct BoxSize {
  double w = 0;
  double h = 0;
};

/// 1 - IoU of two boxes sharing a center; the clustering distance. Scale
/// invariant: d(f*a, f*b) == d(a, b).
double anchor_distance(BoxSize a, BoxSize b);

struct AnchorSet {
  std::vector<BoxSize> anchors;  // sorted ascending by area
  double reference_size = 640;
  double bpr = 0;  // best possible recall of `anchors` against the input boxes
};

struct KmeansTrace {
  int iterations = 0;
  std::vector<double> inertia;  // after each assignment/update round
};

/// K-means over box dimensions with the 1-IoU distance, k-means++ seeding
/// from `seed`, mean centroid updates, at most 300 rounds. Deterministic per
/// seed and independent of input order (boxes are canonically sorted first).
/// Errors: TooFewBoxes, InvalidArgument (non-positive dims or k).
AnchorSet kmeans_anchors(std::span<const BoxSize> boxes, int k, uint64_t seed,
                         double reference_size = 640, KmeansTrace* trace = nullptr);

/// Fraction of boxes for which some anchor keeps every per-dimension ratio
/// below `ratio_threshold`: max(w/wa, wa/w, h/ha, ha/h) < t.
double best_possible_recall(std::span<const BoxSize> anchors, std::span<const BoxSize> boxes,
                            double ratio_threshold = 4.0);

}  // namespace pedtoolkit
