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

#include <doctest.h>

#include <fstream>
#include <random>

#include <opencv2/imgcodecs.hpp>

#include "fixtures.hpp"
#include "pedtoolkit/convert.hpp"
#include "pedtoolkit/error.hpp"
#include "pedtoolkit/io.hpp"
#include "pedtoolkit/labels.hpp"

using namespace pedtoolkit;
using namespace testsupport;

namespace fs = std::filesystem;

namespace {

/// JPEG-encode a synthetic BGR frame.
std::vector<uint8_t> jpeg_frame(int width, int height, int tone) {
  cv::Mat img(height, width, CV_8UC3);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      img.at<cv::Vec3b>(y, x) =
          cv::Vec3b(static_cast<uint8_t>((x + tone) % 256), static_cast<uint8_t>((y + tone) % 256),
                    static_cast<uint8_t>(tone % 256));
    }
  }
  std::vector<uint8_t> out;
  cv::imencode(".jpg", img, out, {cv::IMWRITE_JPEG_QUALITY, 90});
  return out;
}

std::vector<uint8_t> video_bytes(int frames, int width, int height, int tone_base = 0) {
  std::vector<std::vector<uint8_t>> payloads;
  for (int f = 0; f < frames; ++f) payloads.push_back(jpeg_frame(width, height, tone_base + f));
  return write_seq(default_seq_header(static_cast<uint32_t>(frames),
                                      static_cast<uint32_t>(width),
                                      static_cast<uint32_t>(height)),
                   payloads);
}

/// Lay out `root/setXX/VYYY.seq` and the matching annotation file.
void place_video(const fs::path& root, const std::string& set_name, const std::string& video,
                 const std::vector<uint8_t>& seq_bytes, const std::vector<uint8_t>& vbb_bytes) {
  fs::create_directories(root / set_name);
  fs::create_directories(root / "annotations" / set_name);
  write_file(root / set_name / (video + ".seq"), seq_bytes);
  write_file(root / "annotations" / set_name / (video + ".vbb"), vbb_bytes);
}

}  // namespace

TEST_CASE("stride selects every stride-th frame") {
  TempDir tmp("extract");
  const SeqFile seq = open_seq(video_bytes(10, 64, 48));
  ConvertConfig config;
  config.stride = 3;
  config.target_size = 64;
  const auto r3 = extract_frames(seq, config, tmp.path() / "s3", "v");
  CHECK(r3.written == std::vector<int>{0, 3, 6, 9});
  CHECK(r3.skipped.empty());

  config.stride = 1;
  const auto r1 = extract_frames(seq, config, tmp.path() / "s1", "v");
  CHECK(r1.written.size() == 10);
  CHECK(fs::exists(tmp.path() / "s1" / "v_00000.png"));
  CHECK(fs::exists(tmp.path() / "s1" / "v_00009.png"));
}

TEST_CASE("a dataset-geometry frame letterboxes to exactly 640x640") {
  TempDir tmp("letterbox");
  const SeqFile seq = open_seq(video_bytes(1, 640, 480));
  ConvertConfig config;
  config.stride = 1;
  const auto result = extract_frames(seq, config, tmp.path(), "caltech");
  REQUIRE(result.written.size() == 1);
  const cv::Mat img = cv::imread((tmp.path() / "caltech_00000.png").string());
  REQUIRE(!img.empty());
  CHECK(img.cols == 640);
  CHECK(img.rows == 640);
  // gray letterbox bands above and below
  CHECK(img.at<cv::Vec3b>(5, 320) == cv::Vec3b(114, 114, 114));
  CHECK(img.at<cv::Vec3b>(634, 320) == cv::Vec3b(114, 114, 114));
}

TEST_CASE("corrupt payloads are skipped, not fatal") {
  std::vector<std::vector<uint8_t>> payloads = {jpeg_frame(64, 48, 0), fake_jpeg(500, 7),
                                                jpeg_frame(64, 48, 2)};
  const auto bytes = write_seq(default_seq_header(3, 64, 48), payloads);
  TempDir tmp("skip");
  ConvertConfig config;
  config.stride = 1;
  config.target_size = 64;
  const auto result = extract_frames(open_seq(bytes), config, tmp.path(), "v");
  CHECK(result.written == std::vector<int>{0, 2});
  CHECK(result.skipped == std::vector<int>{1});
}

TEST_CASE("annotation conversion applies the class policy") {
  // two tracked objects: a person and a crowd region
  std::vector<VbbFixtureObject> objects;
  VbbFixtureObject person;
  person.frame = 0;
  person.id = 1;
  person.pos = {101, 51, 40, 80};  // 1-based file convention
  objects.push_back(person);
  VbbFixtureObject crowd;
  crowd.frame = 0;
  crowd.id = 2;
  crowd.pos = {201, 51, 100, 80};
  objects.push_back(crowd);

  const VbbFile vbb = parse_vbb(make_vbb(2, {"person", "people"}, objects));
  const auto t = letterbox_for(640, 480, 640);
  ConvertConfig config;
  const auto frames = convert_annotations(vbb, t, config, 2);
  REQUIRE(frames.size() == 2);
  REQUIRE(frames[0].labels.size() == 1);
  REQUIRE(frames[0].ignores.size() == 1);
  CHECK(frames[0].labels[0].class_id == 0);
  CHECK(frames[1].labels.empty());
  CHECK(frames[1].ignores.empty());

  // 1-based pos (101, 51) -> 0-based (100, 50) -> letterboxed canvas
  const Box back = yolo_to_box(frames[0].labels[0], t);
  CHECK(back.left == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(back.top == doctest::Approx(50.0).epsilon(1e-9));
  CHECK(back.width == doctest::Approx(40.0).epsilon(1e-9));
  CHECK(back.height == doctest::Approx(80.0).epsilon(1e-9));
}

TEST_CASE("full-frame person produces the canonical label line") {
  VbbFixtureObject person;
  person.frame = 0;
  person.id = 1;
  person.pos = {1, 1, 640, 480};  // the whole frame, 1-based
  const VbbFile vbb = parse_vbb(make_vbb(1, {"person"}, {person}));
  const auto frames = convert_annotations(vbb, letterbox_for(640, 480, 640), {}, 1);
  REQUIRE(frames[0].labels.size() == 1);
  CHECK(format_yolo_line(frames[0].labels[0]) == "0 0.500000 0.500000 1.000000 0.750000");
}

TEST_CASE("occlusion policy switches between pos and posv") {
  VbbFixtureObject obj;
  obj.frame = 0;
  obj.id = 1;
  obj.pos = {101, 101, 40, 100};
  obj.posv = {101, 101, 40, 50};  // only the upper half visible
  obj.occluded = true;
  const VbbFile vbb = parse_vbb(make_vbb(1, {"person"}, {obj}));
  const auto t = letterbox_for(640, 480, 640);

  ConvertConfig full;
  const auto with_pos = convert_annotations(vbb, t, full, 1);
  ConvertConfig visible;
  visible.occlusion_policy = ConvertConfig::BoxSource::VisibleBox;
  const auto with_posv = convert_annotations(vbb, t, visible, 1);
  CHECK(yolo_to_box(with_pos[0].labels[0], t).height == doctest::Approx(100.0));
  CHECK(yolo_to_box(with_posv[0].labels[0], t).height == doctest::Approx(50.0));
}

TEST_CASE("minimum box height drops short boxes") {
  VbbFixtureObject tall, tiny;
  tall.frame = 0;
  tall.id = 1;
  tall.pos = {11, 11, 30, 90};
  tiny.frame = 0;
  tiny.id = 1;
  tiny.pos = {101, 11, 30, 20};
  const VbbFile vbb = parse_vbb(make_vbb(1, {"person"}, {tall, tiny}));
  ConvertConfig config;
  config.min_box_height = 30;  // canvas pixels, scale is 1 here
  const auto frames = convert_annotations(vbb, letterbox_for(640, 480, 640), config, 1);
  CHECK(frames[0].labels.size() == 1);
}

TEST_CASE("frame count disagreement is an error") {
  const VbbFile vbb = parse_vbb(make_vbb(3, {"person"}, {}));
  CHECK_THROWS_AS(convert_annotations(vbb, letterbox_for(640, 480, 640), {}, 2), Error);
  try {
    convert_annotations(vbb, letterbox_for(640, 480, 640), {}, 2);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FrameMismatch);
  }
}

TEST_CASE("full conversion of a synthetic two-video tree") {
  TempDir tmp("dataset");
  const fs::path root = tmp.path() / "root";
  const fs::path out = tmp.path() / "out";

  VbbFixtureObject person;
  person.frame = 0;
  person.id = 1;
  person.pos = {11, 11, 20, 40};
  place_video(root, "set00", "V000", video_bytes(6, 64, 48, 0),
              make_vbb(6, {"person"}, {person}));
  place_video(root, "set00", "V001", video_bytes(4, 64, 48, 50), make_vbb(4, {"person"}, {}));

  ConvertConfig config;
  config.stride = 2;
  config.target_size = 64;
  config.jobs = 2;
  SplitSpec splits;
  splits.splits.push_back({"train", {"set00"}});

  const Manifest manifest = convert_dataset(root, out, config, splits);
  CHECK(manifest.ok());
  REQUIRE(manifest.videos.size() == 2);
  CHECK(manifest.videos[0].frames_written == 3);  // frames 0, 2, 4
  CHECK(manifest.videos[1].frames_written == 2);  // frames 0, 2
  CHECK(manifest.images.size() == 5);
  CHECK(manifest.images.count("set00_V000_00000") == 1);
  CHECK(manifest.images.at("set00_V000_00004").frame == 4);

  // pairing is total: every image has exactly one label file
  size_t images = 0, labels = 0, ignores = 0;
  for (const auto& entry : fs::directory_iterator(out / "images" / "train")) {
    (void)entry;
    ++images;
  }
  for (const auto& entry : fs::directory_iterator(out / "labels" / "train")) {
    const auto name = entry.path().filename().string();
    if (name.ends_with(".ignore.txt")) {
      ++ignores;
    } else {
      ++labels;
    }
  }
  CHECK(images == 5);
  CHECK(labels == 5);
  CHECK(ignores == 5);

  // annotated frame carries its label, empty frames are zero-byte files
  const auto l0 = read_text_file(out / "labels" / "train" / "set00_V000_00000.txt");
  CHECK(!l0.empty());
  const auto l2 = read_text_file(out / "labels" / "train" / "set00_V000_00002.txt");
  CHECK(l2.empty());

  // every emitted label parses back within the normalized range
  for (const auto& entry : fs::directory_iterator(out / "labels" / "train")) {
    for (const auto& l : parse_label_file(read_text_file(entry.path()))) {
      CHECK(l.cx >= 0.0);
      CHECK(l.cx <= 1.0);
      CHECK(l.w > 0.0);
      CHECK(l.w <= 1.0);
      CHECK(l.cy - l.h / 2 >= -1e-9);
      CHECK(l.cy + l.h / 2 <= 1.0 + 1e-9);
    }
  }

  SUBCASE("re-running the conversion is byte-identical") {
    const auto manifest_bytes = read_file(out / "manifest.json");
    const auto png_bytes = read_file(out / "images" / "train" / "set00_V000_00000.png");
    const fs::path out2 = tmp.path() / "out2";
    convert_dataset(root, out2, config, splits);
    CHECK(read_file(out2 / "manifest.json") == manifest_bytes);
    CHECK(read_file(out2 / "images" / "train" / "set00_V000_00000.png") == png_bytes);
  }
}

TEST_CASE("per-video failures are aggregated, not fatal") {
  TempDir tmp("errors");
  const fs::path root = tmp.path() / "root";
  const fs::path out = tmp.path() / "out";

  VbbFixtureObject person;
  person.frame = 0;
  person.id = 1;
  person.pos = {11, 11, 20, 30};
  place_video(root, "set00", "V000", video_bytes(3, 64, 48), make_vbb(3, {"person"}, {person}));
  // V001 has no annotation file
  fs::create_directories(root / "set00");
  write_file(root / "set00" / "V001.seq", video_bytes(3, 64, 48));
  // V002 disagrees about the frame count
  place_video(root, "set00", "V002", video_bytes(3, 64, 48), make_vbb(5, {"person"}, {}));

  ConvertConfig config;
  config.stride = 1;
  config.target_size = 64;
  SplitSpec splits;
  splits.splits.push_back({"train", {"set00"}});
  const Manifest manifest = convert_dataset(root, out, config, splits);
  CHECK(!manifest.ok());
  CHECK(manifest.errors.size() == 2);
  CHECK(manifest.videos[0].error.empty());
  CHECK(manifest.videos[1].error.find("MissingAnnotation") != std::string::npos);
  CHECK(manifest.videos[2].error.find("FrameMismatch") != std::string::npos);
  // the healthy video still converted
  CHECK(manifest.videos[0].frames_written == 3);
}

TEST_CASE("an empty split spec yields an empty manifest") {
  TempDir tmp("empty");
  const fs::path root = tmp.path() / "root";
  fs::create_directories(root);
  const Manifest manifest = convert_dataset(root, tmp.path() / "out", {}, SplitSpec{});
  CHECK(manifest.ok());
  CHECK(manifest.videos.empty());
  CHECK(manifest.images.empty());
  CHECK(fs::exists(tmp.path() / "out" / "manifest.json"));
}
