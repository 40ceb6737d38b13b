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
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pedtoolkit/eval.hpp"
#include "pedtoolkit/geometry.hpp"
#include "pedtoolkit/mat.hpp"
#include "pedtoolkit/seq.hpp"

namespace testsupport {

// ---------------------------------------------------------------------------
// minimal MAT-file writer, fixtures only: numeric / char / cell / struct
// arrays, optional per-element zlib compression, both byte orders.
// ---------------------------------------------------------------------------

struct MatWriterOptions {
  bool big_endian = false;
  bool compress = false;
  // store integral numeric data in the narrowest of uint8/int16/int32,
  // the way MATLAB v7 does
  bool narrow_numeric = false;
};

std::vector<uint8_t> write_mat(std::span<const pedtoolkit::mat::Array> roots,
                               const MatWriterOptions& options = {});

// Array construction helpers (class Double / Char / Cell / Struct).
pedtoolkit::mat::Array mat_scalar(double v);
pedtoolkit::mat::Array mat_row(const std::vector<double>& v);
pedtoolkit::mat::Array mat_empty();
pedtoolkit::mat::Array mat_chars(const std::string& text);
pedtoolkit::mat::Array mat_cell_row(std::vector<pedtoolkit::mat::Array> cells);
pedtoolkit::mat::Array mat_struct_row(std::vector<std::string> field_names,
                                      std::vector<std::vector<pedtoolkit::mat::Array>> records);

/// Deep semantic equality (name, class, dims, data); used for round trips.
bool mat_equal(const pedtoolkit::mat::Array& a, const pedtoolkit::mat::Array& b);

// ---------------------------------------------------------------------------
// vbb fixtures
// ---------------------------------------------------------------------------

struct VbbFixtureObject {
  int frame = 0;  // 0-based
  int id = 1;
  pedtoolkit::Box pos;
  pedtoolkit::Box posv;
  bool occluded = false;
  bool locked = false;
};

/// Serialize a complete .vbb file (annotation struct "A" with the usual
/// opaque extras included).
std::vector<uint8_t> make_vbb(int n_frame, const std::vector<std::string>& labels,
                              const std::vector<VbbFixtureObject>& objects,
                              const MatWriterOptions& options = {});

// ---------------------------------------------------------------------------
// seq fixtures
// ---------------------------------------------------------------------------

/// A syntactically valid JPEG-looking payload: SOI + deterministic filler +
/// EOI, exactly `size` bytes (size >= 4).
std::vector<uint8_t> fake_jpeg(size_t size, uint32_t fill_seed);

pedtoolkit::SeqHeader default_seq_header(uint32_t frames, uint32_t width = 640,
                                         uint32_t height = 480);

// ---------------------------------------------------------------------------
// randomized evaluation instances
// ---------------------------------------------------------------------------

struct EvalInstance {
  std::vector<pedtoolkit::Detection> detections;
  std::vector<pedtoolkit::GtBox> gts;
  std::vector<pedtoolkit::GtBox> ignores;
};

struct InstanceShape {
  int max_detections = 20;
  int max_gts = 10;
  int images = 2;
  int classes = 1;
  bool with_ignores = true;
};

EvalInstance random_instance(std::mt19937_64& rng, const InstanceShape& shape = {});

// ---------------------------------------------------------------------------
// scratch directories
// ---------------------------------------------------------------------------

class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testsupport
