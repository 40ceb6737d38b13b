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

#include "pedtoolkit/convert.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "pedtoolkit/error.hpp"
#include "pedtoolkit/io.hpp"
#include "pedtoolkit/labels.hpp"
#include "pedtoolkit/version.hpp"

namespace pedtoolkit {

namespace fs = std::filesystem;

cv::Mat letterbox_image(const cv::Mat& src, int target) {
  if (src.empty()) throw Error(ErrorKind::InvalidArgument, "empty image");
  const double scale = std::min(static_cast<double>(target) / src.cols,
                                static_cast<double>(target) / src.rows);
  const int new_w = std::max(1, static_cast<int>(std::lround(src.cols * scale)));
  const int new_h = std::max(1, static_cast<int>(std::lround(src.rows * scale)));
  cv::Mat resized;
  if (new_w == src.cols && new_h == src.rows) {
    resized = src;
  } else {
    cv::resize(src, resized, cv::Size(new_w, new_h), 0, 0, cv::INTER_LINEAR);
  }
  const int pad_left = (target - new_w) / 2;
  const int pad_top = (target - new_h) / 2;
  cv::Mat out;
  cv::copyMakeBorder(resized, out, pad_top, target - new_h - pad_top, pad_left,
                     target - new_w - pad_left, cv::BORDER_CONSTANT, cv::Scalar(114, 114, 114));
  return out;
}

std::string frame_name(const std::string& prefix, int frame) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%05d", frame);
  return prefix + "_" + buf;
}

namespace {

int class_id_of(const std::vector<std::string>& classes, const std::string& label) {
  for (size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == label) return static_cast<int>(i);
  }
  return -1;
}

Box source_box(const VbbObject& obj, const ConvertConfig& config) {
  const bool posv_set = obj.posv.width > 0 && obj.posv.height > 0;
  const Box& chosen = (config.occlusion_policy == ConvertConfig::BoxSource::VisibleBox &&
                       obj.occluded && posv_set)
                          ? obj.posv
                          : obj.pos;
  // the single 1-based -> 0-based conversion point
  return {chosen.left - 1.0, chosen.top - 1.0, chosen.width, chosen.height};
}

}  // namespace

std::vector<FrameLabelSet> convert_annotations(const VbbFile& vbb, const LetterboxTransform& t,
                                               const ConvertConfig& config,
                                               size_t seq_frame_count) {
  if (static_cast<size_t>(vbb.n_frame) != seq_frame_count) {
    throw Error(ErrorKind::FrameMismatch, "vbb has " + std::to_string(vbb.n_frame) +
                                              " frames, seq has " +
                                              std::to_string(seq_frame_count));
  }
  std::vector<FrameLabelSet> out(vbb.obj_lists.size());
  for (size_t frame = 0; frame < vbb.obj_lists.size(); ++frame) {
    for (const auto& obj : vbb.obj_lists[frame]) {
      const int keep_id = class_id_of(config.keep_classes, obj.label);
      const bool is_ignore = class_id_of(config.ignore_classes, obj.label) >= 0;
      if (keep_id < 0 && !is_ignore) continue;
      const auto label = try_box_to_yolo(source_box(obj, config), t, keep_id < 0 ? 0 : keep_id);
      if (!label) continue;  // fully outside the canvas
      if (keep_id >= 0) {
        if (label->h * t.dst_h < config.min_box_height) continue;
        out[frame].labels.push_back(*label);
      } else {
        out[frame].ignores.push_back(*label);
      }
    }
  }
  return out;
}

ExtractResult extract_frames(const SeqFile& seq, const ConvertConfig& config,
                             const fs::path& out_dir, const std::string& prefix) {
  if (config.stride < 1) throw Error(ErrorKind::InvalidArgument, "stride must be >= 1");
  if (config.target_size < 1) throw Error(ErrorKind::InvalidArgument, "target size must be >= 1");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create " + out_dir.string());

  ExtractResult result;
  const std::vector<int> png_params = {cv::IMWRITE_PNG_COMPRESSION, config.png_compression};
  for (size_t i = 0; i < seq.frame_count(); i += static_cast<size_t>(config.stride)) {
    const FrameRecord rec = seq.frame(i);
    const cv::Mat raw(1, static_cast<int>(rec.payload.size()), CV_8UC1,
                      const_cast<uint8_t*>(rec.payload.data()));
    const cv::Mat decoded = cv::imdecode(raw, cv::IMREAD_COLOR);
    if (decoded.empty()) {
      result.skipped.push_back(static_cast<int>(i));
      continue;
    }
    const cv::Mat canvas = letterbox_image(decoded, config.target_size);
    const fs::path path = out_dir / (frame_name(prefix, static_cast<int>(i)) + ".png");
    if (!cv::imwrite(path.string(), canvas, png_params)) {
      throw Error(ErrorKind::IoFailure, "cannot write " + path.string());
    }
    result.written.push_back(static_cast<int>(i));
  }
  return result;
}

SplitSpec SplitSpec::caltech_default() {
  SplitSpec spec;
  std::vector<std::string> train, test;
  for (int i = 0; i <= 5; ++i) train.push_back("set0" + std::to_string(i));
  for (int i = 6; i <= 10; ++i) test.push_back(i < 10 ? "set0" + std::to_string(i) : "set10");
  spec.splits.push_back({"train", std::move(train)});
  spec.splits.push_back({"test", std::move(test)});
  return spec;
}

SplitSpec SplitSpec::parse(const std::string& text) {
  SplitSpec spec;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find(';', start);
    if (end == std::string::npos) end = text.size();
    const std::string part = text.substr(start, end - start);
    if (!part.empty()) {
      const size_t eq = part.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorKind::InvalidArgument, "bad split spec '" + part + "'");
      }
      std::vector<std::string> sets;
      size_t s = eq + 1;
      while (s <= part.size()) {
        size_t c = part.find(',', s);
        if (c == std::string::npos) c = part.size();
        if (c > s) sets.push_back(part.substr(s, c - s));
        s = c + 1;
      }
      if (sets.empty()) throw Error(ErrorKind::InvalidArgument, "split without sets: " + part);
      spec.splits.push_back({part.substr(0, eq), std::move(sets)});
    }
    start = end + 1;
  }
  return spec;
}

namespace {

struct VideoTask {
  std::string split;
  std::string set_name;
  std::string video;  // file stem, e.g. "V000"
  fs::path seq_path;
  fs::path vbb_path;
};

VideoManifest run_video(const VideoTask& task, const ConvertConfig& config, const fs::path& out,
                        std::map<std::string, ImageEntry>& images, std::mutex& images_mutex) {
  VideoManifest vm;
  vm.split = task.split;
  vm.set_name = task.set_name;
  vm.video = task.video;
  try {
    if (!fs::exists(task.vbb_path)) {
      throw Error(ErrorKind::MissingAnnotation, "no annotation file " + task.vbb_path.string());
    }
    const SeqFile seq = open_seq(read_file(task.seq_path));
    vm.frames_total = static_cast<int>(seq.frame_count());
    const VbbFile vbb = parse_vbb(read_file(task.vbb_path));
    const LetterboxTransform t =
        letterbox_for(seq.header().width, seq.header().height, config.target_size);
    const auto frame_labels = convert_annotations(vbb, t, config, seq.frame_count());

    const std::string prefix = task.set_name + "_" + task.video;
    const fs::path image_dir = out / "images" / task.split;
    const fs::path label_dir = out / "labels" / task.split;
    std::error_code ec;
    fs::create_directories(image_dir, ec);
    fs::create_directories(label_dir, ec);

    const auto extracted = extract_frames(seq, config, image_dir, prefix);
    vm.decode_failures = extracted.skipped;
    for (int frame : extracted.written) {
      const std::string name = frame_name(prefix, frame);
      const auto& fl = frame_labels[static_cast<size_t>(frame)];
      write_text_file(label_dir / (name + ".txt"), format_label_file(fl.labels));
      write_text_file(label_dir / (name + ".ignore.txt"), format_label_file(fl.ignores));
      ++vm.frames_written;
      ++vm.labels_written;
      std::lock_guard<std::mutex> lock(images_mutex);
      images[name] = {task.split, task.set_name, task.video, frame};
    }
  } catch (const Error& e) {
    vm.error = e.what();
  }
  return vm;
}

}  // namespace

Manifest convert_dataset(const fs::path& root, const fs::path& out, const ConvertConfig& config,
                         const SplitSpec& splits) {
  Manifest manifest;
  manifest.toolkit_version = std::string(kToolkitVersion);
  manifest.config = config;

  std::vector<VideoTask> tasks;
  for (const auto& [split, sets] : splits.splits) {
    for (const auto& set_name : sets) {
      const fs::path set_dir = root / set_name;
      if (!fs::is_directory(set_dir)) continue;  // partial dataset copies are fine
      for (const auto& seq_path : list_files(set_dir, ".seq")) {
        const std::string video = seq_path.stem().string();
        tasks.push_back({split, set_name, video, seq_path,
                         root / "annotations" / set_name / (video + ".vbb")});
      }
    }
  }
  std::sort(tasks.begin(), tasks.end(), [](const VideoTask& a, const VideoTask& b) {
    return std::tie(a.split, a.set_name, a.video) < std::tie(b.split, b.set_name, b.video);
  });

  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create " + out.string());

  manifest.videos.resize(tasks.size());
  std::mutex images_mutex;
  std::atomic<size_t> next{0};
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const size_t workers =
      std::min<size_t>(tasks.size(), config.jobs > 0 ? static_cast<size_t>(config.jobs) : hw);
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      manifest.videos[i] = run_video(tasks[i], config, out, manifest.images, images_mutex);
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& vm : manifest.videos) {
    if (!vm.error.empty()) {
      manifest.errors.push_back(vm.set_name + "/" + vm.video + ": " + vm.error);
    }
  }
  write_text_file(out / "manifest.json", manifest.to_json());
  return manifest;
}

std::string Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["toolkit_version"] = toolkit_version;
  j["config"] = {
      {"stride", config.stride},
      {"target_size", config.target_size},
      {"keep_classes", config.keep_classes},
      {"ignore_classes", config.ignore_classes},
      {"occlusion_policy",
       config.occlusion_policy == ConvertConfig::BoxSource::FullBox ? "full-box" : "visible-box"},
      {"min_box_height", config.min_box_height},
      {"png_compression", config.png_compression},
  };

  std::map<std::string, std::pair<long, long>> split_counts;
  for (const auto& vm : videos) {
    auto& [imgs, labels] = split_counts[vm.split];
    imgs += vm.frames_written;
    labels += vm.labels_written;
  }
  auto jsplits = nlohmann::ordered_json::object();
  for (const auto& [split, counts] : split_counts) {
    jsplits[split] = {{"images", counts.first}, {"labels", counts.second}};
  }
  j["splits"] = std::move(jsplits);

  auto jvideos = nlohmann::ordered_json::array();
  for (const auto& vm : videos) {
    nlohmann::ordered_json jv;
    jv["split"] = vm.split;
    jv["set"] = vm.set_name;
    jv["video"] = vm.video;
    jv["frames_total"] = vm.frames_total;
    jv["frames_written"] = vm.frames_written;
    jv["labels_written"] = vm.labels_written;
    jv["decode_failures"] = vm.decode_failures;
    if (!vm.error.empty()) jv["error"] = vm.error;
    jvideos.push_back(std::move(jv));
  }
  j["videos"] = std::move(jvideos);

  auto jimages = nlohmann::ordered_json::object();
  for (const auto& [name, entry] : images) {
    jimages[name] = {{"split", entry.split},
                     {"set", entry.set_name},
                     {"video", entry.video},
                     {"frame", entry.frame}};
  }
  j["images"] = std::move(jimages);
  j["errors"] = errors;
  return j.dump(2) + "\n";
}

}  // namespace pedtoolkit
