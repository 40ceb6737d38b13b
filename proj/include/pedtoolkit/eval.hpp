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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pedtoolkit/geometry.hpp"

namespace pedtoolkit {

struct Detection {
  std::string image_id;
  int class_id = 0;
  double confidence = 0;  // in [0, 1]
  Box box;
};

/// A ground-truth or ignore-region box.
struct GtBox {
  std::string image_id;
  int class_id = 0;
  Box box;
};

enum class MatchFlag : uint8_t {
  FalsePositive = 0,
  TruePositive = 1,
  Ignored = 2,  // unmatched detection discarded on an ignore region
};

struct MatchResult {
  std::vector<MatchFlag> flags;  // aligned with the input detection order
  long false_negatives = 0;      // ground truths left unmatched
};

/// Greedy matching for the records of one image and one class: detections in
/// descending confidence (ties by input order) each claim the unmatched
/// ground truth of highest IoU >= threshold.
MatchResult match_detections(std::span<const Detection> detections, std::span<const Box> gts,
                             std::span<const Box> ignores, double iou_threshold);

/// Eq. 1. The no-prediction case is vacuously perfect.
double precision(long tp, long fp);
/// Eq. 2. The no-ground-truth case is vacuously perfect.
double recall(long tp, long fn);
/// Eq. 3, harmonic mean; 0 when both inputs are 0.
double f1_score(double precision, double recall);

/// One point of the precision/recall curve at a confidence threshold.
struct PrPoint {
  double threshold = 0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 1;
  double recall = 1;
};

/// Pooled PR curve over all images and classes at one IoU threshold, one
/// point per distinct confidence, ordered by descending threshold (recall
/// non-decreasing down the list).
std::vector<PrPoint> pr_curve(std::span<const Detection> detections, std::span<const GtBox> gts,
                              std::span<const GtBox> ignores, double iou_threshold,
                              bool use_ignores = true);

/// Eq. 4 over the curve: sum of recall increments times precision, after the
/// monotone precision envelope (disable with envelope=false for the raw sum).
/// Errors: EmptyCurve.
double average_precision(std::span<const PrPoint> curve, bool envelope = true);

/// Eq. 5: arithmetic mean over per-class APs. Errors: NoClasses.
double mean_average_precision(std::span<const double> class_aps);

struct EvalOptions {
  double iou_threshold = 0.5;  // main threshold: PR curve, best-F1, "mAP@.5"
  bool envelope = true;
  bool use_ignores = true;
};

struct ClassReport {
  int class_id = 0;
  double ap_main = 0;             // AP at the main IoU threshold
  std::vector<double> ap_by_iou;  // aligned with EvalReport::iou_range
  long ground_truths = 0;
  long detections = 0;
};

struct EvalReport {
  double iou_threshold = 0.5;
  std::vector<double> iou_range;  // {0.50, 0.55, ..., 0.95}
  std::vector<ClassReport> classes;
  double map_main = 0;    // mAP at iou_threshold
  double map_ranged = 0;  // mAP averaged over iou_range
  double best_f1 = 0;
  double best_f1_threshold = 0;
  double best_f1_precision = 0;
  double best_f1_recall = 0;
  std::vector<PrPoint> curve;  // pooled over classes at iou_threshold
  long images = 0;
  long detections = 0;
  long ground_truths = 0;
  long ignore_regions = 0;
};

EvalReport evaluate(std::span<const Detection> detections, std::span<const GtBox> gts,
                    std::span<const GtBox> ignores, const EvalOptions& options = {});

/// mAP averaged over IoU thresholds 0.50..0.95 step 0.05.
double map_over_iou_range(std::span<const Detection> detections, std::span<const GtBox> gts,
                          std::span<const GtBox> ignores, bool use_ignores = true);

std::string report_to_json(const EvalReport& report);
std::string pr_curve_to_csv(std::span<const PrPoint> curve);
std::string pr_curve_to_svg(std::span<const PrPoint> curve);

/// Detections, labels and ignore regions loaded from per-image text files
/// (label format for gts/ignores, detection format for detections).
struct EvalInputs {
  std::vector<Detection> detections;
  std::vector<GtBox> gts;
  std::vector<GtBox> ignores;
  long images = 0;
};

/// Load `<stem>.txt` ground truth from gt_dir, `<stem>.txt` detections from
/// det_dir; ignore regions come from `<stem>.ignore.txt` in ignore_dir when
/// given (gt files named `*.ignore.txt` are never read as ground truth).
EvalInputs load_eval_inputs(const std::filesystem::path& gt_dir,
                            const std::filesystem::path& det_dir,
                            const std::optional<std::filesystem::path>& ignore_dir);

}  // namespace pedtoolkit
