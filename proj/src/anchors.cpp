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

#include "pedtoolkit/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pedtoolkit/error.hpp"

namespace pedtoolkit {

namespace {

constexpr int kMaxRounds = 300;

// Uniform double in [0, 1) from the top 53 bits; the standard library
// distributions are implementation-defined, this keeps seeds portable.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

size_t weighted_pick(std::span<const double> weights, double total, std::mt19937_64& rng) {
  const double r = uniform01(rng) * total;
  double acc = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (r < acc) return i;
  }
  return weights.size() - 1;
}

std::vector<BoxSize> seed_centers(std::span<const BoxSize> boxes, int k, std::mt19937_64& rng) {
  const size_t n = boxes.size();
  std::vector<BoxSize> centers;
  std::vector<char> taken(n, 0);
  const size_t first = static_cast<size_t>(uniform01(rng) * static_cast<double>(n));
  centers.push_back(boxes[first]);
  taken[first] = 1;

  std::vector<double> d2(n);
  for (size_t i = 0; i < n; ++i) {
    const double d = anchor_distance(boxes[i], centers[0]);
    d2[i] = d * d;
  }
  while (centers.size() < static_cast<size_t>(k)) {
    double total = 0;
    for (double v : d2) total += v;
    size_t pick;
    if (total > 0) {
      pick = weighted_pick(d2, total, rng);
    } else {
      // all remaining mass on existing centers (duplicate boxes): take the
      // first box not yet chosen
      pick = 0;
      while (pick < n && taken[pick]) ++pick;
      if (pick == n) pick = 0;
    }
    centers.push_back(boxes[pick]);
    taken[pick] = 1;
    for (size_t i = 0; i < n; ++i) {
      const double d = anchor_distance(boxes[i], centers.back());
      d2[i] = std::min(d2[i], d * d);
    }
  }
  return centers;
}

}  // namespace

double anchor_distance(BoxSize a, BoxSize b) {
  const double inter = std::min(a.w, b.w) * std::min(a.h, b.h);
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0 ? 1.0 - inter / uni : 1.0;
}

AnchorSet kmeans_anchors(std::span<const BoxSize> boxes, int k, uint64_t seed,
                         double reference_size, KmeansTrace* trace) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
  if (boxes.size() < static_cast<size_t>(k)) {
    throw Error(ErrorKind::TooFewBoxes, std::to_string(boxes.size()) + " boxes for k=" +
                                            std::to_string(k));
  }
  for (const auto& b : boxes) {
    if (b.w <= 0 || b.h <= 0) {
      throw Error(ErrorKind::InvalidArgument, "box dimensions must be positive");
    }
  }

  // canonical order makes the result independent of the input permutation
  std::vector<BoxSize> pts(boxes.begin(), boxes.end());
  std::sort(pts.begin(), pts.end(), [](const BoxSize& a, const BoxSize& b) {
    return a.w != b.w ? a.w < b.w : a.h < b.h;
  });
  const size_t n = pts.size();

  std::mt19937_64 rng(seed);
  std::vector<BoxSize> centers = seed_centers(pts, k, rng);
  std::vector<size_t> assign(n, 0);
  if (trace) {
    trace->iterations = 0;
    trace->inertia.clear();
  }

  double prev_inertia = std::numeric_limits<double>::infinity();
  for (int round = 0; round < kMaxRounds; ++round) {
    bool changed = round == 0;
    for (size_t i = 0; i < n; ++i) {
      size_t best = 0;
      double best_d = anchor_distance(pts[i], centers[0]);
      for (size_t c = 1; c < centers.size(); ++c) {
        const double d = anchor_distance(pts[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed) break;

    std::vector<size_t> counts(centers.size(), 0);
    for (size_t a : assign) ++counts[a];
    // reseed empty clusters to the point farthest from its centroid
    for (size_t c = 0; c < centers.size(); ++c) {
      if (counts[c] != 0) continue;
      size_t worst = n;
      double worst_d = -1;
      for (size_t i = 0; i < n; ++i) {
        if (counts[assign[i]] <= 1) continue;
        const double d = anchor_distance(pts[i], centers[assign[i]]);
        if (d > worst_d) {
          worst_d = d;
          worst = i;
        }
      }
      if (worst == n) continue;
      --counts[assign[worst]];
      assign[worst] = c;
      counts[c] = 1;
      centers[c] = pts[worst];
    }

    const std::vector<BoxSize> before = centers;
    std::vector<BoxSize> next(centers.size(), BoxSize{0, 0});
    for (size_t i = 0; i < n; ++i) {
      next[assign[i]].w += pts[i].w;
      next[assign[i]].h += pts[i].h;
    }
    for (size_t c = 0; c < centers.size(); ++c) {
      if (counts[c] == 0) continue;
      next[c].w /= static_cast<double>(counts[c]);
      next[c].h /= static_cast<double>(counts[c]);
      centers[c] = next[c];
    }

    double inertia = 0;
    for (size_t i = 0; i < n; ++i) {
      const double d = anchor_distance(pts[i], centers[assign[i]]);
      inertia += d * d;
    }
    // the mean update is a heuristic under the IoU distance; back out rather
    // than let the objective climb
    if (inertia > prev_inertia + 1e-12) {
      centers = before;
      break;
    }
    prev_inertia = inertia;
    if (trace) {
      ++trace->iterations;
      trace->inertia.push_back(inertia);
    }
  }

  AnchorSet set;
  set.anchors = std::move(centers);
  std::sort(set.anchors.begin(), set.anchors.end(), [](const BoxSize& a, const BoxSize& b) {
    const double aa = a.w * a.h, ab = b.w * b.h;
    return aa != ab ? aa < ab : a.w < b.w;
  });
  set.reference_size = reference_size;
  set.bpr = best_possible_recall(set.anchors, boxes);
  return set;
}

double best_possible_recall(std::span<const BoxSize> anchors, std::span<const BoxSize> boxes,
                            double ratio_threshold) {
  if (anchors.empty() || boxes.empty()) {
    throw Error(ErrorKind::InvalidArgument, "anchors and boxes must be nonempty");
  }
  size_t covered = 0;
  for (const auto& b : boxes) {
    bool ok = false;
    for (const auto& a : anchors) {
      const double r = std::max(std::max(b.w / a.w, a.w / b.w), std::max(b.h / a.h, a.h / b.h));
      if (r < ratio_threshold) {
        ok = true;
        break;
      }
    }
    if (ok) ++covered;
  }
  return static_cast<double>(covered) / static_cast<double>(boxes.size());
}

}  // namespace pedtoolkit
