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

#include "pedtoolkit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "pedtoolkit/error.hpp"
#include "pedtoolkit/io.hpp"
#include "pedtoolkit/labels.hpp"

namespace pedtoolkit {

MatchResult match_detections(std::span<const Detection> detections, std::span<const Box> gts,
                             std::span<const Box> ignores, double iou_threshold) {
  std::vector<size_t> order(detections.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return detections[a].confidence > detections[b].confidence;
  });

  MatchResult result;
  result.flags.assign(detections.size(), MatchFlag::FalsePositive);
  std::vector<char> matched(gts.size(), 0);
  for (size_t d : order) {
    const Box& det = detections[d].box;
    size_t best = gts.size();
    double best_iou = 0;
    for (size_t j = 0; j < gts.size(); ++j) {
      if (matched[j]) continue;
      const double v = iou(det, gts[j]);
      if (v >= iou_threshold && v > best_iou) {
        best_iou = v;
        best = j;
      }
    }
    if (best != gts.size()) {
      matched[best] = 1;
      result.flags[d] = MatchFlag::TruePositive;
      continue;
    }
    for (const Box& ign : ignores) {
      if (iou(det, ign) >= iou_threshold) {
        result.flags[d] = MatchFlag::Ignored;
        break;
      }
    }
  }
  result.false_negatives =
      static_cast<long>(gts.size()) - std::count(matched.begin(), matched.end(), 1);
  return result;
}

double precision(long tp, long fp) {
  if (tp < 0 || fp < 0) throw Error(ErrorKind::InvalidArgument, "negative counts");
  if (tp + fp == 0) return 1.0;
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double recall(long tp, long fn) {
  if (tp < 0 || fn < 0) throw Error(ErrorKind::InvalidArgument, "negative counts");
  if (tp + fn == 0) return 1.0;
  return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double f1_score(double precision, double recall) {
  if (precision + recall == 0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

namespace {

struct PooledDetection {
  double confidence = 0;
  bool tp = false;
};

/// Runs per-(image, class) matching and pools the surviving detections in
/// their input order, together with the total ground-truth count.
std::pair<std::vector<PooledDetection>, long> pool_matches(std::span<const Detection> detections,
                                                           std::span<const GtBox> gts,
                                                           std::span<const GtBox> ignores,
                                                           double iou_threshold,
                                                           bool use_ignores) {
  using Key = std::pair<std::string, int>;
  std::map<Key, std::vector<size_t>> det_groups;
  std::map<Key, std::vector<Box>> gt_groups;
  std::map<Key, std::vector<Box>> ignore_groups;
  for (size_t i = 0; i < detections.size(); ++i) {
    det_groups[{detections[i].image_id, detections[i].class_id}].push_back(i);
  }
  for (const auto& g : gts) gt_groups[{g.image_id, g.class_id}].push_back(g.box);
  if (use_ignores) {
    for (const auto& g : ignores) ignore_groups[{g.image_id, g.class_id}].push_back(g.box);
  }

  std::vector<MatchFlag> flags(detections.size(), MatchFlag::FalsePositive);
  static const std::vector<Box> kNoBoxes;
  for (const auto& [key, indices] : det_groups) {
    std::vector<Detection> group;
    group.reserve(indices.size());
    for (size_t i : indices) group.push_back(detections[i]);
    const auto git = gt_groups.find(key);
    const auto iit = ignore_groups.find(key);
    const auto res = match_detections(group, git == gt_groups.end() ? kNoBoxes : git->second,
                                      iit == ignore_groups.end() ? kNoBoxes : iit->second,
                                      iou_threshold);
    for (size_t j = 0; j < indices.size(); ++j) flags[indices[j]] = res.flags[j];
  }

  std::vector<PooledDetection> pooled;
  pooled.reserve(detections.size());
  for (size_t i = 0; i < detections.size(); ++i) {
    if (flags[i] == MatchFlag::Ignored) continue;
    pooled.push_back({detections[i].confidence, flags[i] == MatchFlag::TruePositive});
  }
  return {std::move(pooled), static_cast<long>(gts.size())};
}

}  // namespace

std::vector<PrPoint> pr_curve(std::span<const Detection> detections, std::span<const GtBox> gts,
                              std::span<const GtBox> ignores, double iou_threshold,
                              bool use_ignores) {
  auto [pooled, total_gt] = pool_matches(detections, gts, ignores, iou_threshold, use_ignores);
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const PooledDetection& a, const PooledDetection& b) {
                     return a.confidence > b.confidence;
                   });
  std::vector<PrPoint> curve;
  long tp = 0, fp = 0;
  for (size_t i = 0; i < pooled.size(); ++i) {
    if (pooled[i].tp) {
      ++tp;
    } else {
      ++fp;
    }
    // one point per distinct confidence; ties enter together
    if (i + 1 < pooled.size() && pooled[i + 1].confidence == pooled[i].confidence) continue;
    PrPoint p;
    p.threshold = pooled[i].confidence;
    p.tp = tp;
    p.fp = fp;
    p.fn = total_gt - tp;
    p.precision = precision(tp, fp);
    p.recall = recall(tp, p.fn);
    curve.push_back(p);
  }
  return curve;
}

double average_precision(std::span<const PrPoint> curve, bool envelope) {
  if (curve.empty()) throw Error(ErrorKind::EmptyCurve, "no PR points");
  // points ordered by descending threshold: recall is non-decreasing
  std::vector<PrPoint> pts(curve.begin(), curve.end());
  std::stable_sort(pts.begin(), pts.end(),
                   [](const PrPoint& a, const PrPoint& b) { return a.threshold > b.threshold; });
  std::vector<double> prec(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) prec[i] = pts[i].precision;
  if (envelope) {
    for (size_t i = pts.size() - 1; i-- > 0;) prec[i] = std::max(prec[i], prec[i + 1]);
  }
  double ap = 0;
  double prev_recall = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    ap += (pts[i].recall - prev_recall) * prec[i];
    prev_recall = pts[i].recall;
  }
  return std::clamp(ap, 0.0, 1.0);
}

double mean_average_precision(std::span<const double> class_aps) {
  if (class_aps.empty()) throw Error(ErrorKind::NoClasses, "no per-class AP values");
  double sum = 0;
  for (double ap : class_aps) sum += ap;
  return sum / static_cast<double>(class_aps.size());
}

namespace {

std::vector<double> iou_range_thresholds() {
  std::vector<double> out;
  for (int i = 0; i < 10; ++i) out.push_back(0.50 + 0.05 * i);
  return out;
}

double class_ap(std::span<const Detection> detections, std::span<const GtBox> gts,
                std::span<const GtBox> ignores, int class_id, double iou_threshold,
                const EvalOptions& options) {
  std::vector<Detection> class_dets;
  std::vector<GtBox> class_gts;
  std::vector<GtBox> class_ignores;
  for (const auto& d : detections) {
    if (d.class_id == class_id) class_dets.push_back(d);
  }
  for (const auto& g : gts) {
    if (g.class_id == class_id) class_gts.push_back(g);
  }
  for (const auto& g : ignores) {
    if (g.class_id == class_id) class_ignores.push_back(g);
  }
  const auto curve =
      pr_curve(class_dets, class_gts, class_ignores, iou_threshold, options.use_ignores);
  if (curve.empty()) return 0.0;  // no detections for the class
  return average_precision(curve, options.envelope);
}

}  // namespace

EvalReport evaluate(std::span<const Detection> detections, std::span<const GtBox> gts,
                    std::span<const GtBox> ignores, const EvalOptions& options) {
  EvalReport report;
  report.iou_threshold = options.iou_threshold;
  report.iou_range = iou_range_thresholds();
  report.detections = static_cast<long>(detections.size());
  report.ground_truths = static_cast<long>(gts.size());
  report.ignore_regions = static_cast<long>(ignores.size());

  std::set<std::string> images;
  std::set<int> class_ids;
  for (const auto& d : detections) {
    images.insert(d.image_id);
    class_ids.insert(d.class_id);
  }
  for (const auto& g : gts) {
    images.insert(g.image_id);
    class_ids.insert(g.class_id);
  }
  report.images = static_cast<long>(images.size());

  std::vector<double> aps_main;
  std::vector<std::vector<double>> aps_by_iou(report.iou_range.size());
  for (int c : class_ids) {
    ClassReport cr;
    cr.class_id = c;
    for (const auto& d : detections) {
      if (d.class_id == c) ++cr.detections;
    }
    for (const auto& g : gts) {
      if (g.class_id == c) ++cr.ground_truths;
    }
    cr.ap_main = class_ap(detections, gts, ignores, c, options.iou_threshold, options);
    for (size_t t = 0; t < report.iou_range.size(); ++t) {
      cr.ap_by_iou.push_back(class_ap(detections, gts, ignores, c, report.iou_range[t], options));
      aps_by_iou[t].push_back(cr.ap_by_iou.back());
    }
    aps_main.push_back(cr.ap_main);
    report.classes.push_back(std::move(cr));
  }

  if (!aps_main.empty()) {
    report.map_main = mean_average_precision(aps_main);
    double sum = 0;
    for (const auto& aps : aps_by_iou) sum += mean_average_precision(aps);
    report.map_ranged = sum / static_cast<double>(aps_by_iou.size());
  }

  report.curve = pr_curve(detections, gts, ignores, options.iou_threshold, options.use_ignores);
  for (const auto& p : report.curve) {
    const double f = f1_score(p.precision, p.recall);
    if (f > report.best_f1) {
      report.best_f1 = f;
      report.best_f1_threshold = p.threshold;
      report.best_f1_precision = p.precision;
      report.best_f1_recall = p.recall;
    }
  }
  return report;
}

double map_over_iou_range(std::span<const Detection> detections, std::span<const GtBox> gts,
                          std::span<const GtBox> ignores, bool use_ignores) {
  EvalOptions options;
  options.use_ignores = use_ignores;
  return evaluate(detections, gts, ignores, options).map_ranged;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["counts"] = {{"images", report.images},
                 {"detections", report.detections},
                 {"ground_truths", report.ground_truths},
                 {"ignore_regions", report.ignore_regions}};
  j["iou_threshold"] = report.iou_threshold;
  j["iou_range"] = report.iou_range;
  auto classes = nlohmann::ordered_json::array();
  for (const auto& c : report.classes) {
    nlohmann::ordered_json jc;
    jc["class_id"] = c.class_id;
    jc["ap"] = c.ap_main;
    jc["ap_by_iou"] = c.ap_by_iou;
    jc["ground_truths"] = c.ground_truths;
    jc["detections"] = c.detections;
    classes.push_back(std::move(jc));
  }
  j["classes"] = std::move(classes);
  j["map"] = report.map_main;
  j["map_ranged"] = report.map_ranged;
  j["best_f1"] = {{"threshold", report.best_f1_threshold},
                  {"precision", report.best_f1_precision},
                  {"recall", report.best_f1_recall},
                  {"f1", report.best_f1}};
  auto curve = nlohmann::ordered_json::array();
  for (const auto& p : report.curve) {
    curve.push_back({{"threshold", p.threshold},
                     {"tp", p.tp},
                     {"fp", p.fp},
                     {"fn", p.fn},
                     {"precision", p.precision},
                     {"recall", p.recall}});
  }
  j["pr_curve"] = std::move(curve);
  return j.dump(2) + "\n";
}

std::string pr_curve_to_csv(std::span<const PrPoint> curve) {
  std::string out = "threshold,precision,recall\n";
  char buf[128];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", p.threshold, p.precision, p.recall);
    out += buf;
  }
  return out;
}

std::string pr_curve_to_svg(std::span<const PrPoint> curve) {
  constexpr int kSize = 480;
  constexpr int kMargin = 48;
  constexpr int kPlot = kSize - 2 * kMargin;
  const auto x_of = [&](double recall) { return kMargin + recall * kPlot; };
  const auto y_of = [&](double prec) { return kSize - kMargin - prec * kPlot; };

  std::string svg;
  char buf[256];
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kSize) +
         "\" height=\"" + std::to_string(kSize) + "\" viewBox=\"0 0 " + std::to_string(kSize) +
         " " + std::to_string(kSize) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
                "stroke=\"black\"/>\n",
                kMargin, kMargin, kPlot, kPlot);
  svg += buf;
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.0f\" y=\"%d\" font-size=\"12\" text-anchor=\"middle\">%.2f</text>\n",
                  x_of(v), kSize - kMargin + 18, v);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%.0f\" font-size=\"12\" text-anchor=\"end\">%.2f</text>\n",
                  kMargin - 6, y_of(v) + 4, v);
    svg += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%d\" y=\"%d\" font-size=\"13\" text-anchor=\"middle\">recall</text>\n",
                kSize / 2, kSize - 10);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"14\" y=\"%d\" font-size=\"13\" text-anchor=\"middle\" "
                "transform=\"rotate(-90 14 %d)\">precision</text>\n",
                kSize / 2, kSize / 2);
  svg += buf;
  if (!curve.empty()) {
    svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (const auto& p : curve) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", x_of(p.recall), y_of(p.precision));
      svg += buf;
    }
    svg += "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

EvalInputs load_eval_inputs(const std::filesystem::path& gt_dir,
                            const std::filesystem::path& det_dir,
                            const std::optional<std::filesystem::path>& ignore_dir) {
  namespace fs = std::filesystem;
  EvalInputs inputs;

  std::set<std::string> stems;
  const auto gt_files = list_files(gt_dir, ".txt");
  for (const auto& p : gt_files) {
    const std::string name = p.filename().string();
    if (name.ends_with(".ignore.txt")) continue;
    stems.insert(name.substr(0, name.size() - 4));
  }
  for (const auto& p : list_files(det_dir, ".txt")) {
    const std::string name = p.filename().string();
    if (name.ends_with(".ignore.txt")) continue;
    stems.insert(name.substr(0, name.size() - 4));
  }

  for (const auto& stem : stems) {
    const fs::path gt_path = gt_dir / (stem + ".txt");
    if (fs::exists(gt_path)) {
      for (const auto& l : parse_label_file(read_text_file(gt_path))) {
        inputs.gts.push_back({stem, l.class_id, label_to_box(l)});
      }
    }
    const fs::path det_path = det_dir / (stem + ".txt");
    if (fs::exists(det_path)) {
      for (const auto& d : parse_detection_file(read_text_file(det_path))) {
        inputs.detections.push_back(
            {stem, d.class_id, d.confidence, label_to_box({d.class_id, d.cx, d.cy, d.w, d.h})});
      }
    }
    if (ignore_dir) {
      const fs::path ign_path = *ignore_dir / (stem + ".ignore.txt");
      if (fs::exists(ign_path)) {
        for (const auto& l : parse_label_file(read_text_file(ign_path))) {
          inputs.ignores.push_back({stem, l.class_id, label_to_box(l)});
        }
      }
    }
  }
  inputs.images = static_cast<long>(stems.size());
  return inputs;
}

}  // namespace pedtoolkit
