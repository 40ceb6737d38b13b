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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pedtoolkit/geometry.hpp"
#include "pedtoolkit/mat.hpp"

namespace pedtoolkit {

/// One annotated pedestrian box on one frame. Coordinates keep the file's
/// 1-based left/top convention; conversion to 0-based pixels happens at the
/// geometry boundary (dataset_convert), nowhere else.
struct VbbObject {
  int id = 0;     // track id, 1..max_obj
  int frame = 0;  // 0-based, position in the per-frame object lists
  Box pos;
  Box posv;  // visible region, all-zero when not annotated
  bool occluded = false;
  bool locked = false;
  std::string label;
};

struct VbbFile {
  int n_frame = 0;
  int max_obj = 0;
  std::vector<std::vector<VbbObject>> obj_lists;  // length n_frame
  std::vector<std::string> labels;                // track id -> label, index id-1
  std::map<std::string, mat::Array> extras;       // altered/log/... kept opaquely

  size_t object_count() const {
    size_t n = 0;
    for (const auto& frame : obj_lists) n += frame.size();
    return n;
  }
};

/// Parse a .vbb annotation file (MAT-file Level 5 container holding the
/// annotation record "A"). Errors: those of parse_mat, plus MissingField and
/// SchemaMismatch.
VbbFile parse_vbb(std::span<const uint8_t> bytes);

/// Deterministic JSON dump, byte-identical across runs for identical input.
/// Schema is documented in docs/formats.md.
std::string vbb_to_json(const VbbFile& vbb);

/// Non-fatal oddities (e.g. posv extending outside pos, which real files
/// contain); surfaced by the CLI as warnings.
std::vector<std::string> lint_vbb(const VbbFile& vbb);

}  // namespace pedtoolkit
