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

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <opencv2/imgcodecs.hpp>

#include "pedtoolkit/anchors.hpp"
#include "pedtoolkit/convert.hpp"
#include "pedtoolkit/error.hpp"
#include "pedtoolkit/eval.hpp"
#include "pedtoolkit/io.hpp"
#include "pedtoolkit/labels.hpp"
#include "pedtoolkit/mosaic.hpp"
#include "pedtoolkit/seq.hpp"
#include "pedtoolkit/vbb.hpp"
#include "pedtoolkit/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace pedtoolkit;

namespace {

void log_config(const std::string& command, const ordered_json& config) {
  std::cerr << "[pedtoolkit] " << command << " " << config.dump() << "\n";
}

ordered_json seq_header_json(const SeqFile& seq) {
  const SeqHeader& h = seq.header();
  ordered_json j;
  j["container"] = "seq";
  j["magic"] = h.magic;
  j["version"] = h.version;
  j["description"] = h.description;
  j["width"] = h.width;
  j["height"] = h.height;
  j["bit_depth"] = h.bit_depth;
  j["bit_depth_real"] = h.bit_depth_real;
  j["image_size_bytes"] = h.image_size_bytes;
  j["image_format"] = h.image_format;
  j["frame_count"] = h.frame_count;
  j["true_image_size"] = h.true_image_size;
  j["fps"] = h.fps;
  j["record_trailer_size"] = seq.record_trailer_size();
  return j;
}

int cmd_info(const std::string& file) {
  const auto bytes = read_file(file);
  const bool is_seq = bytes.size() >= 4 && bytes[0] == 0xED && bytes[1] == 0xFE &&
                      bytes[2] == 0x00 && bytes[3] == 0x00;
  if (is_seq || fs::path(file).extension() == ".seq") {
    const SeqFile seq = open_seq(bytes);
    std::cout << seq_header_json(seq).dump(2) << "\n";
    return 0;
  }
  const VbbFile vbb = parse_vbb(bytes);
  for (const auto& w : lint_vbb(vbb)) std::cerr << "[pedtoolkit] warning: " << w << "\n";
  ordered_json j;
  j["container"] = "vbb";
  j["n_frame"] = vbb.n_frame;
  j["max_obj"] = vbb.max_obj;
  j["labels"] = vbb.labels;
  j["objects"] = vbb.object_count();
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_vbb_dump(const std::string& file, const std::string& out) {
  const VbbFile vbb = parse_vbb(read_file(file));
  for (const auto& w : lint_vbb(vbb)) std::cerr << "[pedtoolkit] warning: " << w << "\n";
  const std::string json = vbb_to_json(vbb);
  if (out.empty()) {
    std::cout << json;
  } else {
    write_text_file(out, json);
  }
  return 0;
}

int cmd_extract(const std::string& file, const std::string& out, int stride, int size) {
  ConvertConfig config;
  config.stride = stride;
  config.target_size = size;
  const SeqFile seq = open_seq(read_file(file));
  const std::string prefix = fs::path(file).stem().string();
  const auto result = extract_frames(seq, config, out, prefix);
  for (int frame : result.skipped) {
    std::cerr << "[pedtoolkit] warning: frame " << frame << " failed to decode, skipped\n";
  }
  std::cerr << "[pedtoolkit] wrote " << result.written.size() << " frames to " << out << "\n";
  return 0;
}

int cmd_convert(const std::string& root, const std::string& out, const ConvertConfig& config,
                const std::string& split_text) {
  const SplitSpec splits =
      split_text.empty() ? SplitSpec::caltech_default() : SplitSpec::parse(split_text);
  const Manifest manifest = convert_dataset(root, out, config, splits);
  for (const auto& vm : manifest.videos) {
    for (int frame : vm.decode_failures) {
      std::cerr << "[pedtoolkit] warning: " << vm.set_name << "/" << vm.video << " frame "
                << frame << " failed to decode, skipped\n";
    }
  }
  for (const auto& e : manifest.errors) std::cerr << "[pedtoolkit] error: " << e << "\n";
  long images = 0;
  for (const auto& vm : manifest.videos) images += vm.frames_written;
  std::cerr << "[pedtoolkit] converted " << images << " frames from " << manifest.videos.size()
            << " videos into " << out << "\n";
  return manifest.ok() ? 0 : 2;
}

int cmd_mosaic(const std::vector<std::string>& images, std::vector<std::string> labels,
               const std::string& out, int size, uint64_t seed, double min_side) {
  if (labels.empty()) {
    for (const auto& img : images) {
      labels.push_back(fs::path(img).replace_extension(".txt").string());
    }
  }
  if (labels.size() != images.size()) {
    throw Error(ErrorKind::WrongArity, "need one label file per image");
  }
  std::vector<LabeledImage> inputs;
  for (size_t i = 0; i < images.size(); ++i) {
    LabeledImage li;
    li.image = cv::imread(images[i], cv::IMREAD_COLOR);
    if (li.image.empty()) throw Error(ErrorKind::DecodeFailure, "cannot read " + images[i]);
    if (fs::exists(labels[i])) {
      li.labels = parse_label_file(read_text_file(labels[i]));
    } else {
      std::cerr << "[pedtoolkit] warning: no label file " << labels[i] << ", assuming empty\n";
    }
    inputs.push_back(std::move(li));
  }
  const MosaicSpec spec = MosaicSpec::sampled(size, seed, min_side);
  std::cerr << "[pedtoolkit] mosaic center (" << spec.center_x << ", " << spec.center_y << ")\n";
  const MosaicResult result = mosaic(inputs, spec);
  std::error_code ec;
  fs::create_directories(out, ec);
  const fs::path png = fs::path(out) / "mosaic.png";
  if (!cv::imwrite(png.string(), result.image, {cv::IMWRITE_PNG_COMPRESSION, 3})) {
    throw Error(ErrorKind::IoFailure, "cannot write " + png.string());
  }
  write_text_file(fs::path(out) / "mosaic.txt", format_label_file(result.labels));
  std::cerr << "[pedtoolkit] wrote " << png.string() << " with " << result.labels.size()
            << " labels\n";
  return 0;
}

int cmd_anchors(const std::string& labels_dir, int k, uint64_t seed, int size, double threshold,
                bool as_json) {
  std::vector<BoxSize> boxes;
  size_t degenerate = 0;
  for (const auto& path : list_files(labels_dir, ".txt")) {
    if (path.filename().string().ends_with(".ignore.txt")) continue;
    for (const auto& l : parse_label_file(read_text_file(path))) {
      if (l.w > 0 && l.h > 0) {
        boxes.push_back({l.w * size, l.h * size});
      } else {
        ++degenerate;
      }
    }
  }
  if (degenerate > 0) {
    std::cerr << "[pedtoolkit] warning: skipped " << degenerate << " zero-size boxes\n";
  }
  const AnchorSet set = kmeans_anchors(boxes, k, seed, size);
  const double bpr = best_possible_recall(set.anchors, boxes, threshold);
  if (as_json) {
    ordered_json j;
    auto anchors = ordered_json::array();
    for (const auto& a : set.anchors) anchors.push_back({a.w, a.h});
    j["anchors"] = std::move(anchors);
    j["reference_size"] = set.reference_size;
    j["bpr"] = bpr;
    j["ratio_threshold"] = threshold;
    j["boxes"] = boxes.size();
    std::cout << j.dump(2) << "\n";
  } else {
    char buf[64];
    for (const auto& a : set.anchors) {
      std::snprintf(buf, sizeof(buf), "%.1f,%.1f\n", a.w, a.h);
      std::cout << buf;
    }
    std::snprintf(buf, sizeof(buf), "bpr %.4f over %zu boxes\n", bpr, boxes.size());
    std::cout << buf;
  }
  return 0;
}

int cmd_eval(const std::string& gt, const std::string& det, std::string ignore_dir, bool no_ignore,
             double iou_thr, const std::string& out, bool raw, bool svg) {
  EvalOptions options;
  options.iou_threshold = iou_thr;
  options.envelope = !raw;
  options.use_ignores = !no_ignore;
  std::optional<fs::path> ignores;
  if (!no_ignore) ignores = ignore_dir.empty() ? fs::path(gt) : fs::path(ignore_dir);
  const EvalInputs inputs = load_eval_inputs(gt, det, ignores);
  const EvalReport report = evaluate(inputs.detections, inputs.gts, inputs.ignores, options);

  std::error_code ec;
  fs::create_directories(out, ec);
  write_text_file(fs::path(out) / "report.json", report_to_json(report));
  write_text_file(fs::path(out) / "pr.csv", pr_curve_to_csv(report.curve));
  if (svg) write_text_file(fs::path(out) / "pr.svg", pr_curve_to_svg(report.curve));
  std::cerr << "[pedtoolkit] map " << report.map_main << " map_ranged " << report.map_ranged
            << " best_f1 " << report.best_f1 << " (" << report.images << " images)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Caltech pedestrian dataset conversion and evaluation toolkit"};
  app.set_version_flag("--version", std::string(kToolkitVersion));
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  // info
  std::string info_file;
  auto* info = app.add_subcommand("info", "Dump a seq or vbb header as JSON");
  info->add_option("file", info_file, "A .seq or .vbb file")->required()->check(CLI::ExistingFile);

  // vbb-dump
  std::string dump_file, dump_out;
  auto* vbb_dump = app.add_subcommand("vbb-dump", "Dump a vbb annotation file as JSON");
  vbb_dump->add_option("file", dump_file, "A .vbb file")->required()->check(CLI::ExistingFile);
  vbb_dump->add_option("--out", dump_out, "Output file (default: stdout)");

  // extract
  std::string extract_file, extract_out;
  int extract_stride = 30, extract_size = 640;
  auto* extract = app.add_subcommand("extract", "Extract letterboxed PNG frames from a seq file");
  extract->add_option("file", extract_file, "A .seq file")->required()->check(CLI::ExistingFile);
  extract->add_option("--out", extract_out, "Output directory")->required();
  extract->add_option("--stride", extract_stride, "Keep every stride-th frame")
      ->check(CLI::PositiveNumber);
  extract->add_option("--size", extract_size, "Square canvas size in pixels")
      ->check(CLI::PositiveNumber);

  // convert
  std::string convert_root, convert_out, convert_splits, convert_policy = "full";
  ConvertConfig convert_config;
  auto* convert = app.add_subcommand("convert", "Convert a Caltech-layout tree to YOLO data");
  convert->add_option("--root", convert_root, "Dataset root with setXX/ and annotations/")
      ->required()
      ->check(CLI::ExistingDirectory);
  convert->add_option("--out", convert_out, "Output directory")->required();
  convert->add_option("--stride", convert_config.stride, "Keep every stride-th frame")
      ->check(CLI::PositiveNumber);
  convert->add_option("--size", convert_config.target_size, "Square canvas size in pixels")
      ->check(CLI::PositiveNumber);
  convert->add_option("--splits", convert_splits,
                      "Split spec, e.g. 'train=set00,set01;test=set06' "
                      "(default: Caltech convention set00-05 train, set06-10 test)");
  convert->add_option("--policy", convert_policy, "Box source: full or visible")
      ->check(CLI::IsMember({"full", "visible"}));
  convert->add_option("--min-height", convert_config.min_box_height,
                      "Drop kept boxes shorter than this after transform (pixels)");
  convert->add_option("--jobs", convert_config.jobs, "Parallel videos (0 = all cores)")
      ->envname("PED_TOOLKIT_JOBS");

  // mosaic
  std::vector<std::string> mosaic_images, mosaic_labels;
  std::string mosaic_out;
  int mosaic_size = 640;
  uint64_t mosaic_seed = 0;
  double mosaic_min_side = 2.0;
  auto* mosaic_cmd = app.add_subcommand("mosaic", "Compose four labeled images into one mosaic");
  mosaic_cmd->add_option("images", mosaic_images, "Four image files")
      ->required()
      ->expected(4)
      ->check(CLI::ExistingFile);
  mosaic_cmd->add_option("--labels", mosaic_labels,
                         "Four label files (default: image path with .txt)");
  mosaic_cmd->add_option("--out", mosaic_out, "Output directory")->required();
  mosaic_cmd->add_option("--size", mosaic_size, "Quadrant size s; the canvas is 2s x 2s")
      ->check(CLI::PositiveNumber);
  mosaic_cmd->add_option("--seed", mosaic_seed, "RNG seed for the center point");
  mosaic_cmd->add_option("--min-side", mosaic_min_side, "Drop clipped boxes smaller than this");

  // anchors
  std::string anchors_dir;
  int anchors_k = 9, anchors_size = 640;
  uint64_t anchors_seed = 0;
  double anchors_threshold = 4.0;
  bool anchors_json = false;
  auto* anchors_cmd = app.add_subcommand("anchors", "K-means anchor boxes from YOLO labels");
  anchors_cmd->add_option("--labels", anchors_dir, "Directory of YOLO label files")
      ->required()
      ->check(CLI::ExistingDirectory);
  anchors_cmd->add_option("--k", anchors_k, "Number of anchors")->check(CLI::PositiveNumber);
  anchors_cmd->add_option("--seed", anchors_seed, "RNG seed");
  anchors_cmd->add_option("--size", anchors_size, "Reference image size in pixels")
      ->check(CLI::PositiveNumber);
  anchors_cmd->add_option("--threshold", anchors_threshold,
                          "Best-possible-recall ratio threshold");
  anchors_cmd->add_flag("--json", anchors_json, "Emit JSON instead of text");

  // eval
  std::string eval_gt, eval_det, eval_ignore, eval_out = ".";
  double eval_iou = 0.5;
  bool eval_no_ignore = false, eval_raw = false, eval_svg = false;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate detections against YOLO ground truth");
  eval_cmd->add_option("--gt", eval_gt, "Ground-truth label directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--det", eval_det, "Detection directory (class conf cx cy w h)")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--ignore", eval_ignore,
                       "Directory of *.ignore.txt files (default: the --gt directory)");
  eval_cmd->add_flag("--no-ignore", eval_no_ignore, "Disable ignore-region handling");
  eval_cmd->add_option("--iou", eval_iou, "Main IoU threshold")->check(CLI::Range(0.0, 1.0));
  eval_cmd->add_option("--out", eval_out, "Output directory for report.json and pr.csv");
  eval_cmd->add_flag("--raw", eval_raw, "Skip the monotone precision envelope");
  eval_cmd->add_flag("--svg", eval_svg, "Also write pr.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() != 0) {
      std::cerr << e.what() << "\n\n" << app.help() << "\n";
      return 1;
    }
    return 0;
  }

  try {
    if (info->parsed()) {
      log_config("info", {{"file", info_file}});
      return cmd_info(info_file);
    }
    if (vbb_dump->parsed()) {
      log_config("vbb-dump", {{"file", dump_file}, {"out", dump_out}});
      return cmd_vbb_dump(dump_file, dump_out);
    }
    if (extract->parsed()) {
      log_config("extract", {{"file", extract_file},
                             {"out", extract_out},
                             {"stride", extract_stride},
                             {"size", extract_size}});
      return cmd_extract(extract_file, extract_out, extract_stride, extract_size);
    }
    if (convert->parsed()) {
      convert_config.occlusion_policy = convert_policy == "visible"
                                            ? ConvertConfig::BoxSource::VisibleBox
                                            : ConvertConfig::BoxSource::FullBox;
      log_config("convert", {{"root", convert_root},
                             {"out", convert_out},
                             {"stride", convert_config.stride},
                             {"size", convert_config.target_size},
                             {"splits", convert_splits},
                             {"policy", convert_policy},
                             {"min_height", convert_config.min_box_height},
                             {"jobs", convert_config.jobs}});
      return cmd_convert(convert_root, convert_out, convert_config, convert_splits);
    }
    if (mosaic_cmd->parsed()) {
      log_config("mosaic", {{"images", mosaic_images},
                            {"labels", mosaic_labels},
                            {"out", mosaic_out},
                            {"size", mosaic_size},
                            {"seed", mosaic_seed},
                            {"min_side", mosaic_min_side}});
      return cmd_mosaic(mosaic_images, mosaic_labels, mosaic_out, mosaic_size, mosaic_seed,
                        mosaic_min_side);
    }
    if (anchors_cmd->parsed()) {
      log_config("anchors", {{"labels", anchors_dir},
                             {"k", anchors_k},
                             {"seed", anchors_seed},
                             {"size", anchors_size},
                             {"threshold", anchors_threshold},
                             {"json", anchors_json}});
      return cmd_anchors(anchors_dir, anchors_k, anchors_seed, anchors_size, anchors_threshold,
                         anchors_json);
    }
    if (eval_cmd->parsed()) {
      log_config("eval", {{"gt", eval_gt},
                          {"det", eval_det},
                          {"ignore", eval_ignore},
                          {"no_ignore", eval_no_ignore},
                          {"iou", eval_iou},
                          {"out", eval_out},
                          {"raw", eval_raw},
                          {"svg", eval_svg}});
      return cmd_eval(eval_gt, eval_det, eval_ignore, eval_no_ignore, eval_iou, eval_out, eval_raw,
                      eval_svg);
    }
  } catch (const Error& e) {
    std::cerr << "[pedtoolkit] error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "[pedtoolkit] error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
