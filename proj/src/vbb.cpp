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

#include "pedtoolkit/vbb.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "pedtoolkit/error.hpp"

namespace pedtoolkit {

namespace {

using mat::Array;
using mat::ArrayClass;

const Array* find_field(const Array& record_array, size_t element, const std::string& name) {
  for (size_t f = 0; f < record_array.field_names.size(); ++f) {
    if (record_array.field_names[f] == name) return &record_array.records[element][f];
  }
  return nullptr;
}

const Array& require_field(const Array& record_array, size_t element, const std::string& name) {
  const Array* field = find_field(record_array, element, name);
  if (!field) throw Error(ErrorKind::MissingField, "annotation record lacks field '" + name + "'");
  return *field;
}

double numeric_scalar(const Array& a, const std::string& what) {
  if (!a.is_numeric() || a.reals.size() != 1) {
    throw Error(ErrorKind::SchemaMismatch, what + " is not a numeric scalar");
  }
  return a.reals[0];
}

Box box_from_field(const Array& a, const std::string& what) {
  if (a.is_numeric() && a.is_empty()) return {};
  if (!a.is_numeric() || a.reals.size() != 4) {
    throw Error(ErrorKind::SchemaMismatch, what + " is not a 1x4 numeric array");
  }
  return {a.reals[0], a.reals[1], a.reals[2], a.reals[3]};
}

bool flag_from_field(const Array& a, const std::string& what) {
  return numeric_scalar(a, what) != 0;
}

}  // namespace

VbbFile parse_vbb(std::span<const uint8_t> bytes) {
  const auto arrays = mat::parse_mat(bytes);
  const Array* root = nullptr;
  for (const auto& a : arrays) {
    if (a.name == "A") root = &a;
  }
  if (!root) throw Error(ErrorKind::MissingField, "no annotation record 'A' in file");
  if (root->cls != ArrayClass::Struct || root->element_count() != 1) {
    throw Error(ErrorKind::SchemaMismatch, "annotation record 'A' is not a 1x1 struct");
  }

  VbbFile vbb;
  const double n_frame = numeric_scalar(require_field(*root, 0, "nFrame"), "nFrame");
  const double max_obj = numeric_scalar(require_field(*root, 0, "maxObj"), "maxObj");
  if (n_frame < 0 || n_frame != std::floor(n_frame)) {
    throw Error(ErrorKind::SchemaMismatch, "nFrame is not a non-negative integer");
  }
  if (max_obj < 0 || max_obj != std::floor(max_obj)) {
    throw Error(ErrorKind::SchemaMismatch, "maxObj is not a non-negative integer");
  }
  vbb.n_frame = static_cast<int>(n_frame);
  vbb.max_obj = static_cast<int>(max_obj);

  const Array& obj_lbl = require_field(*root, 0, "objLbl");
  if (obj_lbl.cls == ArrayClass::Cell) {
    for (const auto& cell : obj_lbl.cells) {
      if (cell.cls != ArrayClass::Char) {
        throw Error(ErrorKind::SchemaMismatch, "objLbl entry is not a character array");
      }
      vbb.labels.push_back(cell.text);
    }
  } else if (!obj_lbl.is_empty()) {
    throw Error(ErrorKind::SchemaMismatch, "objLbl is not a cell array");
  }
  if (vbb.labels.size() != static_cast<size_t>(vbb.max_obj)) {
    throw Error(ErrorKind::SchemaMismatch,
                "objLbl has " + std::to_string(vbb.labels.size()) + " entries, maxObj is " +
                    std::to_string(vbb.max_obj));
  }

  const Array& obj_lists = require_field(*root, 0, "objLists");
  if (obj_lists.cls != ArrayClass::Cell) {
    if (!(vbb.n_frame == 0 && obj_lists.is_empty())) {
      throw Error(ErrorKind::SchemaMismatch, "objLists is not a cell array");
    }
  }
  if (obj_lists.cells.size() != static_cast<size_t>(vbb.n_frame)) {
    throw Error(ErrorKind::SchemaMismatch,
                "objLists has " + std::to_string(obj_lists.cells.size()) +
                    " frames, nFrame is " + std::to_string(vbb.n_frame));
  }

  vbb.obj_lists.resize(static_cast<size_t>(vbb.n_frame));
  for (size_t frame = 0; frame < obj_lists.cells.size(); ++frame) {
    const Array& entry = obj_lists.cells[frame];
    if (entry.is_empty()) continue;  // frames with no objects store []
    if (entry.cls != ArrayClass::Struct) {
      throw Error(ErrorKind::SchemaMismatch,
                  "objLists frame " + std::to_string(frame) + " is not a struct array");
    }
    for (size_t e = 0; e < entry.element_count(); ++e) {
      VbbObject obj;
      obj.frame = static_cast<int>(frame);
      const double id = numeric_scalar(require_field(entry, e, "id"), "object id");
      if (id < 1 || id > vbb.max_obj || id != std::floor(id)) {
        throw Error(ErrorKind::SchemaMismatch,
                    "object id " + std::to_string(id) + " outside 1..maxObj");
      }
      obj.id = static_cast<int>(id);
      obj.pos = box_from_field(require_field(entry, e, "pos"), "pos");
      obj.posv = box_from_field(require_field(entry, e, "posv"), "posv");
      obj.occluded = flag_from_field(require_field(entry, e, "occl"), "occl");
      obj.locked = flag_from_field(require_field(entry, e, "lock"), "lock");
      if (obj.pos.width < 0 || obj.pos.height < 0) {
        throw Error(ErrorKind::SchemaMismatch, "pos has negative extent");
      }
      obj.label = vbb.labels[static_cast<size_t>(obj.id - 1)];
      vbb.obj_lists[frame].push_back(std::move(obj));
    }
  }

  for (size_t f = 0; f < root->field_names.size(); ++f) {
    const auto& name = root->field_names[f];
    if (name == "nFrame" || name == "maxObj" || name == "objLbl" || name == "objLists") continue;
    vbb.extras.emplace(name, root->records[0][f]);
  }
  return vbb;
}

std::string vbb_to_json(const VbbFile& vbb) {
  nlohmann::ordered_json j;
  j["n_frame"] = vbb.n_frame;
  j["max_obj"] = vbb.max_obj;
  j["labels"] = vbb.labels;
  auto objects = nlohmann::ordered_json::array();
  for (const auto& frame : vbb.obj_lists) {
    for (const auto& o : frame) {
      nlohmann::ordered_json jo;
      jo["frame"] = o.frame;
      jo["id"] = o.id;
      jo["label"] = o.label;
      jo["pos"] = {o.pos.left, o.pos.top, o.pos.width, o.pos.height};
      jo["posv"] = {o.posv.left, o.posv.top, o.posv.width, o.posv.height};
      jo["occluded"] = o.occluded;
      jo["locked"] = o.locked;
      objects.push_back(std::move(jo));
    }
  }
  j["objects"] = std::move(objects);
  return j.dump(2) + "\n";
}

std::vector<std::string> lint_vbb(const VbbFile& vbb) {
  std::vector<std::string> warnings;
  for (const auto& frame : vbb.obj_lists) {
    for (const auto& o : frame) {
      const bool posv_set = !(o.posv.left == 0 && o.posv.top == 0 && o.posv.width == 0 &&
                              o.posv.height == 0);
      if (!posv_set) continue;
      const bool contained = o.posv.left >= o.pos.left && o.posv.top >= o.pos.top &&
                             o.posv.right() <= o.pos.right() && o.posv.bottom() <= o.pos.bottom();
      if (!contained) {
        warnings.push_back("frame " + std::to_string(o.frame) + " id " + std::to_string(o.id) +
                           ": posv extends outside pos");
      }
    }
  }
  return warnings;
}

}  // namespace pedtoolkit
