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

#include "fixtures.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>

#include "pedtoolkit/bytes.hpp"
#include "pedtoolkit/error.hpp"
#include "pedtoolkit/text.hpp"

namespace testsupport {

using pedtoolkit::Box;
using pedtoolkit::ByteWriter;
using pedtoolkit::utf8_to_utf16;
namespace mat = pedtoolkit::mat;

namespace {

enum : uint32_t {
  miINT8 = 1,
  miUINT8 = 2,
  miINT16 = 3,
  miINT32 = 5,
  miUINT32 = 6,
  miDOUBLE = 9,
  miUINT16 = 4,
  miMATRIX = 14,
  miCOMPRESSED = 15,
};

void write_tag(ByteWriter& out, uint32_t type, uint32_t nbytes) {
  out.u32(type);
  out.u32(nbytes);
}

/// Small element format when the data fits in 4 bytes (the packed form).
void write_element(ByteWriter& out, uint32_t type, std::span<const uint8_t> data) {
  if (!data.empty() && data.size() <= 4) {
    out.u32(type | (static_cast<uint32_t>(data.size()) << 16));
    out.bytes(data);
    out.fill(4 - data.size());
    return;
  }
  write_tag(out, type, static_cast<uint32_t>(data.size()));
  out.bytes(data);
  out.align(8);
}

void write_numeric_payload(ByteWriter& out, const std::vector<double>& values,
                           const MatWriterOptions& options) {
  bool integral = options.narrow_numeric;
  double lo = 0, hi = 0;
  for (double v : values) {
    if (v != std::floor(v)) {
      integral = false;
      break;
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  ByteWriter data(options.big_endian);
  uint32_t type = miDOUBLE;
  if (integral && !values.empty()) {
    if (lo >= 0 && hi <= 255) {
      type = miUINT8;
      for (double v : values) data.u8(static_cast<uint8_t>(v));
    } else if (lo >= -32768 && hi <= 32767) {
      type = miINT16;
      for (double v : values) data.i16(static_cast<int16_t>(v));
    } else if (lo >= -2147483648.0 && hi <= 2147483647.0) {
      type = miINT32;
      for (double v : values) data.i32(static_cast<int32_t>(v));
    } else {
      for (double v : values) data.f64(v);
    }
  } else {
    for (double v : values) data.f64(v);
  }
  const auto bytes = data.data();
  write_element(out, type, bytes);
}

void write_matrix_body(ByteWriter& out, const mat::Array& a, const MatWriterOptions& options,
                       bool keep_name);

/// Full miMATRIX element (tag + body), nested arrays are anonymous.
void write_matrix_element(ByteWriter& out, const mat::Array& a, const MatWriterOptions& options,
                          bool keep_name) {
  ByteWriter body(options.big_endian);
  write_matrix_body(body, a, options, keep_name);
  const auto bytes = body.data();
  write_tag(out, miMATRIX, static_cast<uint32_t>(bytes.size()));
  out.bytes(bytes);
  out.align(8);
}

void write_matrix_body(ByteWriter& out, const mat::Array& a, const MatWriterOptions& options,
                       bool keep_name) {
  // array flags
  write_tag(out, miUINT32, 8);
  uint32_t flags = static_cast<uint32_t>(a.cls);
  if (a.logical) flags |= 0x0200;
  out.u32(flags);
  out.u32(0);

  // dimensions
  ByteWriter dims(options.big_endian);
  for (int32_t d : a.dims) dims.i32(d);
  const auto dim_bytes = dims.data();
  write_tag(out, miINT32, static_cast<uint32_t>(dim_bytes.size()));
  out.bytes(dim_bytes);
  out.align(8);

  // name (empty for nested arrays, and written in the long form then, the
  // way MATLAB does)
  const std::string name = keep_name ? a.name : std::string();
  write_element(out, miINT8,
                std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(name.data()),
                                         name.size()));

  switch (a.cls) {
    case mat::ArrayClass::Double:
      write_numeric_payload(out, a.reals, options);
      break;
    case mat::ArrayClass::Char: {
      ByteWriter data(options.big_endian);
      for (uint16_t u : utf8_to_utf16(a.text)) data.u16(u);
      const auto bytes = data.data();
      write_element(out, miUINT16, bytes);
      break;
    }
    case mat::ArrayClass::Cell:
      for (const auto& cell : a.cells) write_matrix_element(out, cell, options, false);
      break;
    case mat::ArrayClass::Struct: {
      constexpr int32_t kFieldNameLen = 32;
      ByteWriter len(options.big_endian);
      len.i32(kFieldNameLen);
      const auto len_bytes = len.data();
      write_element(out, miINT32, len_bytes);

      ByteWriter names(options.big_endian);
      for (const auto& f : a.field_names) {
        std::string padded = f;
        padded.resize(kFieldNameLen, '\0');
        names.bytes(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(padded.data()),
                                             padded.size()));
      }
      const auto name_bytes = names.data();
      write_tag(out, miINT8, static_cast<uint32_t>(name_bytes.size()));
      out.bytes(name_bytes);
      out.align(8);

      for (const auto& record : a.records) {
        for (const auto& field : record) write_matrix_element(out, field, options, false);
      }
      break;
    }
    default:
      throw pedtoolkit::Error(pedtoolkit::ErrorKind::InvalidArgument,
                              "fixture writer does not handle this class");
  }
}

}  // namespace

std::vector<uint8_t> write_mat(std::span<const mat::Array> roots,
                               const MatWriterOptions& options) {
  ByteWriter out(options.big_endian);
  std::string banner = "MATLAB 5.0 MAT-file, written by the pedtoolkit test fixture writer";
  banner.resize(116, ' ');
  out.bytes(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(banner.data()),
                                     banner.size()));
  out.fill(8);       // subsystem data offset
  out.u16(0x0100);   // version
  out.u16(0x4D49);   // 'M''I' in file order

  for (const auto& root : roots) {
    ByteWriter element(options.big_endian);
    write_matrix_element(element, root, options, true);
    const auto element_bytes = element.data();
    if (options.compress) {
      const auto packed = mat::zlib_deflate(element_bytes);
      write_tag(out, miCOMPRESSED, static_cast<uint32_t>(packed.size()));
      out.bytes(packed);
      out.align(8);
    } else {
      out.bytes(element_bytes);
    }
  }
  return out.take();
}

mat::Array mat_scalar(double v) {
  mat::Array a;
  a.cls = mat::ArrayClass::Double;
  a.dims = {1, 1};
  a.reals = {v};
  return a;
}

mat::Array mat_row(const std::vector<double>& v) {
  mat::Array a;
  a.cls = mat::ArrayClass::Double;
  a.dims = {1, static_cast<int32_t>(v.size())};
  a.reals = v;
  return a;
}

mat::Array mat_empty() {
  mat::Array a;
  a.cls = mat::ArrayClass::Double;
  a.dims = {0, 0};
  return a;
}

mat::Array mat_chars(const std::string& text) {
  mat::Array a;
  a.cls = mat::ArrayClass::Char;
  a.dims = {text.empty() ? 0 : 1, static_cast<int32_t>(text.size())};
  a.text = text;
  return a;
}

mat::Array mat_cell_row(std::vector<mat::Array> cells) {
  mat::Array a;
  a.cls = mat::ArrayClass::Cell;
  a.dims = {cells.empty() ? 0 : 1, static_cast<int32_t>(cells.size())};
  a.cells = std::move(cells);
  return a;
}

mat::Array mat_struct_row(std::vector<std::string> field_names,
                          std::vector<std::vector<mat::Array>> records) {
  mat::Array a;
  a.cls = mat::ArrayClass::Struct;
  a.dims = {records.empty() ? 0 : 1, static_cast<int32_t>(records.size())};
  a.field_names = std::move(field_names);
  a.records = std::move(records);
  return a;
}

bool mat_equal(const mat::Array& a, const mat::Array& b) {
  if (a.cls != b.cls || a.name != b.name || a.dims != b.dims) return false;
  if (a.reals != b.reals || a.text != b.text) return false;
  if (a.field_names != b.field_names) return false;
  if (a.cells.size() != b.cells.size() || a.records.size() != b.records.size()) return false;
  for (size_t i = 0; i < a.cells.size(); ++i) {
    if (!mat_equal(a.cells[i], b.cells[i])) return false;
  }
  for (size_t i = 0; i < a.records.size(); ++i) {
    if (a.records[i].size() != b.records[i].size()) return false;
    for (size_t f = 0; f < a.records[i].size(); ++f) {
      if (!mat_equal(a.records[i][f], b.records[i][f])) return false;
    }
  }
  return true;
}

std::vector<uint8_t> make_vbb(int n_frame, const std::vector<std::string>& labels,
                              const std::vector<VbbFixtureObject>& objects,
                              const MatWriterOptions& options) {
  std::vector<mat::Array> frames(static_cast<size_t>(n_frame), mat_empty());
  std::vector<std::vector<VbbFixtureObject>> per_frame(static_cast<size_t>(n_frame));
  for (const auto& obj : objects) per_frame.at(static_cast<size_t>(obj.frame)).push_back(obj);

  const std::vector<std::string> fields = {"id", "pos", "occl", "lock", "posv"};
  for (int f = 0; f < n_frame; ++f) {
    const auto& list = per_frame[static_cast<size_t>(f)];
    if (list.empty()) continue;  // [] like real files
    std::vector<std::vector<mat::Array>> records;
    for (const auto& obj : list) {
      records.push_back({
          mat_scalar(obj.id),
          mat_row({obj.pos.left, obj.pos.top, obj.pos.width, obj.pos.height}),
          mat_scalar(obj.occluded ? 1 : 0),
          mat_scalar(obj.locked ? 1 : 0),
          mat_row({obj.posv.left, obj.posv.top, obj.posv.width, obj.posv.height}),
      });
    }
    frames[static_cast<size_t>(f)] = mat_struct_row(fields, std::move(records));
  }

  std::vector<mat::Array> label_cells;
  for (const auto& l : labels) label_cells.push_back(mat_chars(l));

  const int max_obj = static_cast<int>(labels.size());
  std::vector<double> per_id_zeros(static_cast<size_t>(max_obj), 0.0);

  mat::Array a = mat_struct_row(
      {"nFrame", "objLists", "maxObj", "objInit", "objLbl", "objStr", "objEnd", "objHide",
       "altered", "log", "logLen"},
      {{
          mat_scalar(n_frame),
          mat_cell_row(std::move(frames)),
          mat_scalar(max_obj),
          max_obj > 0 ? mat_row(per_id_zeros) : mat_empty(),
          mat_cell_row(std::move(label_cells)),
          max_obj > 0 ? mat_row(per_id_zeros) : mat_empty(),
          max_obj > 0 ? mat_row(per_id_zeros) : mat_empty(),
          max_obj > 0 ? mat_row(per_id_zeros) : mat_empty(),
          mat_scalar(0),
          mat_empty(),
          mat_scalar(0),
      }});
  a.name = "A";
  return write_mat(std::span<const mat::Array>(&a, 1), options);
}

std::vector<uint8_t> fake_jpeg(size_t size, uint32_t fill_seed) {
  if (size < 4) size = 4;
  std::vector<uint8_t> out(size);
  out[0] = 0xFF;
  out[1] = 0xD8;
  uint32_t state = fill_seed * 2654435761u + 1;
  for (size_t i = 2; i + 2 < size; ++i) {
    state = state * 1664525u + 1013904223u;
    out[i] = static_cast<uint8_t>(state >> 24);
  }
  out[size - 2] = 0xFF;
  out[size - 1] = 0xD9;
  return out;
}

pedtoolkit::SeqHeader default_seq_header(uint32_t frames, uint32_t width, uint32_t height) {
  pedtoolkit::SeqHeader h;
  h.width = width;
  h.height = height;
  h.frame_count = frames;
  h.description = "pedtoolkit test fixture";
  h.image_size_bytes = width * height * 3;
  h.true_image_size = width * height * 3;
  return h;
}

EvalInstance random_instance(std::mt19937_64& rng, const InstanceShape& shape) {
  const auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  const auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<uint64_t>(n)); };

  EvalInstance inst;
  const int n_gts = shape.max_gts > 0 ? pick(shape.max_gts + 1) : 0;
  const int n_dets = shape.max_detections > 0 ? pick(shape.max_detections + 1) : 0;

  const auto random_box = [&]() {
    return Box{uniform(0, 80), uniform(0, 80), uniform(2, 30), uniform(2, 30)};
  };
  const auto image_of = [&](int idx) { return "img" + std::to_string(idx % shape.images); };

  for (int i = 0; i < n_gts; ++i) {
    inst.gts.push_back({image_of(pick(shape.images)), pick(shape.classes), random_box()});
  }
  if (shape.with_ignores && pick(2) == 1) {
    const int n_ign = pick(3);
    for (int i = 0; i < n_ign; ++i) {
      inst.ignores.push_back({image_of(pick(shape.images)), pick(shape.classes), random_box()});
    }
  }
  for (int i = 0; i < n_dets; ++i) {
    pedtoolkit::Detection det;
    det.confidence = uniform(0.01, 0.99);
    // bias detections toward ground truths so IoUs spread across the
    // matching threshold instead of clustering at zero
    if (!inst.gts.empty() && pick(10) < 7) {
      const auto& gt = inst.gts[static_cast<size_t>(pick(static_cast<int>(inst.gts.size())))];
      det.image_id = gt.image_id;
      det.class_id = gt.class_id;
      det.box = Box{gt.box.left + uniform(-6, 6), gt.box.top + uniform(-6, 6),
                    std::max(1.0, gt.box.width + uniform(-5, 5)),
                    std::max(1.0, gt.box.height + uniform(-5, 5))};
    } else {
      det.image_id = image_of(pick(shape.images));
      det.class_id = pick(shape.classes);
      det.box = random_box();
    }
    inst.detections.push_back(std::move(det));
  }
  return inst;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<uint64_t> counter{0};
  const auto base = std::filesystem::temp_directory_path();
  path_ = base / ("pedtoolkit_" + tag + "_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace testsupport
