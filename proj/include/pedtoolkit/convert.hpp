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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

#include "pedtoolkit/geometry.hpp"
#include "pedtoolkit/seq.hpp"
#include "pedtoolkit/vbb.hpp"

namespace pedtoolkit {

/// Conversion settings. keep_classes[i] maps to YOLO class id i ("person"
/// is class 0 by default); ignore_classes become ignore-region files for the
/// evaluator; every other label is dropped.
struct ConvertConfig {
  int stride = 30;
  int target_size = 640;
  std::vector<std::string> keep_classes = {"person"};
  std::vector<std::string> ignore_classes = {"people", "person?", "person-fa"};
  enum class BoxSource { FullBox, VisibleBox };
  BoxSource occlusion_policy = BoxSource::FullBox;
  double min_box_height = 0;  // canvas pixels, applied to kept labels
  int jobs = 0;               // 0 = hardware concurrency
  int png_compression = 3;    // pinned so reruns are byte-identical
};

/// Aspect-preserving resize of an 8-bit BGR image onto a target x target
/// canvas, gray-114 padding split evenly.
cv::Mat letterbox_image(const cv::Mat& src, int target);

/// Image file name for one extracted frame: `<prefix>_<frame%05d>`.
std::string frame_name(const std::string& prefix, int frame);

/// Labels of one frame after filtering and transform.
struct FrameLabelSet {
  std::vector<YoloLabel> labels;
  std::vector<YoloLabel> ignores;
};

/// Transform every annotated frame into YOLO labels et al. The vbb frame
/// count must match the seq frame count (FrameMismatch). Box coordinates go
/// from the file's 1-based convention to 0-based pixels here, nowhere else.
std::vector<FrameLabelSet> convert_annotations(const VbbFile& vbb, const LetterboxTransform& t,
                                               const ConvertConfig& config,
                                               size_t seq_frame_count);

struct ExtractResult {
  std::vector<int> written;  // frame indices, ascending
  std::vector<int> skipped;  // frames whose JPEG payload failed to decode
};

/// Decode every stride-th frame, letterbox it and write
/// `<out_dir>/<prefix>_<frame%05d>.png`. Corrupt frames are skipped and
/// reported, not fatal.
ExtractResult extract_frames(const SeqFile& seq, const ConvertConfig& config,
                             const std::filesystem::path& out_dir, const std::string& prefix);

/// Split name -> Caltech set directory names.
struct SplitSpec {
  std::vector<std::pair<std::string, std::vector<std::string>>> splits;

  /// The Caltech convention: set00-set05 train, set06-set10 test.
  static SplitSpec caltech_default();
  /// Parse "train=set00,set01;test=set06" (InvalidArgument on bad syntax).
  static SplitSpec parse(const std::string& text);
};

struct VideoManifest {
  std::string split;
  std::string set_name;
  std::string video;
  int frames_total = 0;
  int frames_written = 0;
  int labels_written = 0;          // label files, equals frames_written
  std::vector<int> decode_failures;
  std::string error;  // nonempty when the video failed outright
};

struct ImageEntry {
  std::string split;
  std::string set_name;
  std::string video;
  int frame = 0;
};

struct Manifest {
  std::string toolkit_version;
  ConvertConfig config;
  std::vector<VideoManifest> videos;        // sorted by (split, set, video)
  std::map<std::string, ImageEntry> images; // image name -> origin
  std::vector<std::string> errors;

  bool ok() const { return errors.empty(); }
  std::string to_json() const;
};

/// Convert a Caltech-layout tree (`<root>/setXX/VYYY.seq` plus
/// `<root>/annotations/setXX/VYYY.vbb`) into `images/<split>/*.png`,
/// `labels/<split>/*.txt` + `*.ignore.txt` and `manifest.json` under `out`.
/// Videos run in parallel (config.jobs); outputs and the manifest are
/// deterministic for a given config. Per-file failures are aggregated in
/// Manifest::errors instead of aborting the run.
Manifest convert_dataset(const std::filesystem::path& root, const std::filesystem::path& out,
                         const ConvertConfig& config, const SplitSpec& splits);

}  // namespace pedtoolkit
