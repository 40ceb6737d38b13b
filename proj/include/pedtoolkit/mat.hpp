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
#include <span>
#include <string>
#include <vector>

namespace pedtoolkit::mat {

// Constrained MAT-file Level 5 reader: exactly the subset .vbb annotation
// files need. Compressed elements (RFC 1950 zlib streams), numeric arrays,
// character arrays, cell arrays and structure arrays are handled, in both
// byte orders and in both the 8-byte and the packed small-element tag form.
// Everything else is rejected with UnsupportedElementType.

enum class ArrayClass : uint8_t {
  Cell = 1,
  Struct = 2,
  Object = 3,
  Char = 4,
  Sparse = 5,
  Double = 6,
  Single = 7,
  Int8 = 8,
  UInt8 = 9,
  Int16 = 10,
  UInt16 = 11,
  Int32 = 12,
  UInt32 = 13,
  Int64 = 14,
  UInt64 = 15,
};

struct Array {
  ArrayClass cls = ArrayClass::Double;
  std::string name;
  std::vector<int32_t> dims;
  bool logical = false;

  // exactly one of these carries data, per cls
  std::vector<double> reals;                // numeric classes, column-major, widened
  std::string text;                         // Char, UTF-8
  std::vector<Array> cells;                 // Cell, column-major
  std::vector<std::string> field_names;     // Struct
  std::vector<std::vector<Array>> records;  // Struct: records[element][field]

  size_t element_count() const {
    size_t n = 1;
    for (int32_t d : dims) n *= static_cast<size_t>(d < 0 ? 0 : d);
    return dims.empty() ? 0 : n;
  }
  bool is_numeric() const { return cls >= ArrayClass::Double; }
  bool is_empty() const { return element_count() == 0; }
};

/// Parse a MAT-file Level 5 container into its top-level arrays.
/// Errors: BadHeader, UnsupportedElementType, DecompressFailure, Truncated.
std::vector<Array> parse_mat(std::span<const uint8_t> bytes);

/// RFC 1950 zlib stream -> raw bytes. Errors: DecompressFailure.
std::vector<uint8_t> zlib_inflate(std::span<const uint8_t> compressed);

/// Raw bytes -> RFC 1950 zlib stream (used by the fixture writer and tools).
std::vector<uint8_t> zlib_deflate(std::span<const uint8_t> raw);

}  // namespace pedtoolkit::mat
