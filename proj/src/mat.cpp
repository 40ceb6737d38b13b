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

#include "pedtoolkit/mat.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>

#include "pedtoolkit/bytes.hpp"
#include "pedtoolkit/text.hpp"

namespace pedtoolkit::mat {

namespace {

// MAT data type codes
enum : uint32_t {
  miINT8 = 1,
  miUINT8 = 2,
  miINT16 = 3,
  miUINT16 = 4,
  miINT32 = 5,
  miUINT32 = 6,
  miSINGLE = 7,
  miDOUBLE = 9,
  miINT64 = 12,
  miUINT64 = 13,
  miMATRIX = 14,
  miCOMPRESSED = 15,
  miUTF8 = 16,
  miUTF16 = 17,
  miUTF32 = 18,
};

struct Tag {
  uint32_t type = 0;
  uint32_t nbytes = 0;
  bool small = false;
};

// Both tag forms. In the packed form the type sits in the low 16 bits of the
// first word and the byte count (1..4) in the high 16 bits; the data shares
// the 8-byte slot.
Tag read_tag(ByteReader& in) {
  Tag tag;
  const uint32_t word = in.u32();
  if ((word >> 16) != 0) {
    tag.small = true;
    tag.type = word & 0xFFFF;
    tag.nbytes = word >> 16;
    if (tag.nbytes > 4) throw Error(ErrorKind::BadRecord, "small element longer than 4 bytes");
  } else {
    tag.type = word;
    tag.nbytes = in.u32();
  }
  return tag;
}

/// Reads one tagged sub-element and returns its raw data bytes, consuming
/// the trailing alignment padding.
std::span<const uint8_t> read_raw_element(ByteReader& in, Tag& tag) {
  tag = read_tag(in);
  if (tag.small) {
    auto data = in.bytes(tag.nbytes);
    in.skip(4 - tag.nbytes);
    return data;
  }
  auto data = in.bytes(tag.nbytes);
  const size_t rem = tag.nbytes % 8;
  if (rem != 0 && in.remaining() >= 8 - rem) in.skip(8 - rem);
  return data;
}

size_t numeric_width(uint32_t type) {
  switch (type) {
    case miINT8:
    case miUINT8:
    case miUTF8:
      return 1;
    case miINT16:
    case miUINT16:
    case miUTF16:
      return 2;
    case miINT32:
    case miUINT32:
    case miSINGLE:
    case miUTF32:
      return 4;
    case miINT64:
    case miUINT64:
    case miDOUBLE:
      return 8;
    default:
      return 0;
  }
}

double decode_numeric(std::span<const uint8_t> raw, size_t i, uint32_t type, bool swap) {
  const size_t w = numeric_width(type);
  uint64_t bits = 0;
  for (size_t b = 0; b < w; ++b) {
    const size_t src = swap ? (w - 1 - b) : b;
    bits |= static_cast<uint64_t>(raw[i * w + src]) << (8 * b);
  }
  switch (type) {
    case miINT8: return static_cast<double>(static_cast<int8_t>(bits));
    case miUINT8: return static_cast<double>(static_cast<uint8_t>(bits));
    case miINT16: return static_cast<double>(static_cast<int16_t>(bits));
    case miUINT16: return static_cast<double>(static_cast<uint16_t>(bits));
    case miINT32: return static_cast<double>(static_cast<int32_t>(bits));
    case miUINT32: return static_cast<double>(static_cast<uint32_t>(bits));
    case miSINGLE: return static_cast<double>(std::bit_cast<float>(static_cast<uint32_t>(bits)));
    case miDOUBLE: return std::bit_cast<double>(bits);
    case miINT64: return static_cast<double>(static_cast<int64_t>(bits));
    case miUINT64: return static_cast<double>(bits);
    default:
      throw Error(ErrorKind::UnsupportedElementType,
                  "numeric data of type " + std::to_string(type));
  }
}

std::vector<double> read_numeric_data(ByteReader& in) {
  Tag tag;
  auto raw = read_raw_element(in, tag);
  const size_t w = numeric_width(tag.type);
  if (w == 0 || tag.type == miUTF8 || tag.type == miUTF16 || tag.type == miUTF32) {
    throw Error(ErrorKind::UnsupportedElementType,
                "type " + std::to_string(tag.type) + " where numeric data was expected");
  }
  if (tag.nbytes % w != 0) throw Error(ErrorKind::BadRecord, "numeric data size misaligned");
  std::vector<double> out(tag.nbytes / w);
  for (size_t i = 0; i < out.size(); ++i) out[i] = decode_numeric(raw, i, tag.type, in.swapped());
  return out;
}

std::string read_char_data(ByteReader& in) {
  Tag tag;
  auto raw = read_raw_element(in, tag);
  switch (tag.type) {
    case miUTF8:
      return std::string(reinterpret_cast<const char*>(raw.data()), raw.size());
    case miINT8:
    case miUINT8: {
      // bytes as latin-1
      std::string out;
      out.reserve(raw.size());
      for (uint8_t b : raw) {
        if (b < 0x80) {
          out.push_back(static_cast<char>(b));
        } else {
          out.push_back(static_cast<char>(0xC0 | (b >> 6)));
          out.push_back(static_cast<char>(0x80 | (b & 0x3F)));
        }
      }
      return out;
    }
    case miUINT16:
    case miUTF16: {
      if (raw.size() % 2 != 0) throw Error(ErrorKind::BadRecord, "odd UTF-16 byte count");
      std::vector<uint16_t> units(raw.size() / 2);
      for (size_t i = 0; i < units.size(); ++i) {
        units[i] = in.swapped()
                       ? static_cast<uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1])
                       : static_cast<uint16_t>(raw[2 * i] | (raw[2 * i + 1] << 8));
      }
      return utf16_to_utf8(units);
    }
    default:
      throw Error(ErrorKind::UnsupportedElementType,
                  "type " + std::to_string(tag.type) + " where character data was expected");
  }
}

Array parse_matrix(ByteReader& in);

Array parse_matrix_element(ByteReader& in) {
  const Tag tag = read_tag(in);
  if (tag.type != miMATRIX) {
    throw Error(ErrorKind::UnsupportedElementType,
                "expected an array element, got type " + std::to_string(tag.type));
  }
  ByteReader body(in.bytes(tag.nbytes), in.swapped());
  const size_t rem = tag.nbytes % 8;
  if (rem != 0 && in.remaining() >= 8 - rem) in.skip(8 - rem);
  return parse_matrix(body);
}

Array parse_matrix(ByteReader& in) {
  Array a;

  // array flags
  Tag tag;
  auto flags_raw = read_raw_element(in, tag);
  if (tag.type != miUINT32 || flags_raw.size() < 8) {
    throw Error(ErrorKind::BadRecord, "malformed array flags");
  }
  ByteReader flags_in(flags_raw, in.swapped());
  const uint32_t flags = flags_in.u32();
  a.cls = static_cast<ArrayClass>(flags & 0xFF);
  a.logical = (flags & 0x0200) != 0;
  const bool is_complex = (flags & 0x0800) != 0;

  // dimensions
  auto dims_raw = read_raw_element(in, tag);
  if (tag.type != miINT32) throw Error(ErrorKind::BadRecord, "malformed dimensions element");
  ByteReader dims_in(dims_raw, in.swapped());
  for (size_t i = 0; i < dims_raw.size() / 4; ++i) a.dims.push_back(dims_in.i32());

  // name
  auto name_raw = read_raw_element(in, tag);
  if (tag.type != miINT8) throw Error(ErrorKind::BadRecord, "malformed array name element");
  a.name.assign(reinterpret_cast<const char*>(name_raw.data()), name_raw.size());

  switch (a.cls) {
    case ArrayClass::Double:
    case ArrayClass::Single:
    case ArrayClass::Int8:
    case ArrayClass::UInt8:
    case ArrayClass::Int16:
    case ArrayClass::UInt16:
    case ArrayClass::Int32:
    case ArrayClass::UInt32:
    case ArrayClass::Int64:
    case ArrayClass::UInt64: {
      if (is_complex) {
        throw Error(ErrorKind::UnsupportedElementType, "complex arrays are not supported");
      }
      a.reals = read_numeric_data(in);
      if (a.reals.size() != a.element_count()) {
        throw Error(ErrorKind::BadRecord, "numeric data does not match dimensions");
      }
      break;
    }
    case ArrayClass::Char: {
      a.text = read_char_data(in);
      break;
    }
    case ArrayClass::Cell: {
      const size_t n = a.element_count();
      a.cells.reserve(n);
      for (size_t i = 0; i < n; ++i) a.cells.push_back(parse_matrix_element(in));
      break;
    }
    case ArrayClass::Struct: {
      auto len_raw = read_raw_element(in, tag);
      if (tag.type != miINT32 || len_raw.size() < 4) {
        throw Error(ErrorKind::BadRecord, "malformed field name length");
      }
      ByteReader len_in(len_raw, in.swapped());
      const int32_t name_len = len_in.i32();
      if (name_len <= 0) throw Error(ErrorKind::BadRecord, "non-positive field name length");

      auto names_raw = read_raw_element(in, tag);
      if (tag.type != miINT8 || names_raw.size() % static_cast<size_t>(name_len) != 0) {
        throw Error(ErrorKind::BadRecord, "malformed field names element");
      }
      const size_t n_fields = names_raw.size() / static_cast<size_t>(name_len);
      for (size_t f = 0; f < n_fields; ++f) {
        const char* p = reinterpret_cast<const char*>(names_raw.data()) + f * name_len;
        a.field_names.emplace_back(p, strnlen(p, static_cast<size_t>(name_len)));
      }
      const size_t n = a.element_count();
      a.records.resize(n);
      for (size_t e = 0; e < n; ++e) {
        a.records[e].reserve(n_fields);
        for (size_t f = 0; f < n_fields; ++f) a.records[e].push_back(parse_matrix_element(in));
      }
      break;
    }
    default:
      throw Error(ErrorKind::UnsupportedElementType,
                  "array class " + std::to_string(static_cast<int>(a.cls)) + " is not supported");
  }
  return a;
}

}  // namespace

std::vector<uint8_t> zlib_inflate(std::span<const uint8_t> compressed) {
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) throw Error(ErrorKind::DecompressFailure, "inflateInit failed");
  std::vector<uint8_t> out(std::max<size_t>(compressed.size() * 4, 1024));
  zs.next_in = const_cast<Bytef*>(compressed.data());
  zs.avail_in = static_cast<uInt>(compressed.size());
  size_t written = 0;
  int rc = Z_OK;
  do {
    if (written == out.size()) out.resize(out.size() * 2);
    zs.next_out = out.data() + written;
    zs.avail_out = static_cast<uInt>(out.size() - written);
    rc = inflate(&zs, Z_NO_FLUSH);
    written = out.size() - zs.avail_out;
    const bool stalled = rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0;
    if ((rc != Z_OK && rc != Z_STREAM_END) || stalled) {
      inflateEnd(&zs);
      throw Error(ErrorKind::DecompressFailure, "zlib stream is corrupt or incomplete");
    }
  } while (rc != Z_STREAM_END);
  inflateEnd(&zs);
  out.resize(written);
  return out;
}

std::vector<uint8_t> zlib_deflate(std::span<const uint8_t> raw) {
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<uint8_t> out(bound);
  if (compress2(out.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw Error(ErrorKind::DecompressFailure, "zlib compression failed");
  }
  out.resize(bound);
  return out;
}

std::vector<Array> parse_mat(std::span<const uint8_t> bytes) {
  if (bytes.size() < 128) throw Error(ErrorKind::BadHeader, "shorter than the 128-byte header");
  bool swap;
  if (bytes[126] == 'I' && bytes[127] == 'M') {
    swap = std::endian::native == std::endian::big;
  } else if (bytes[126] == 'M' && bytes[127] == 'I') {
    swap = std::endian::native == std::endian::little;
  } else {
    throw Error(ErrorKind::BadHeader, "missing MI endianness indicator");
  }
  ByteReader in(bytes, swap);
  in.seek(124);
  if (in.u16() != 0x0100) throw Error(ErrorKind::BadHeader, "unexpected MAT version field");
  in.seek(128);

  std::vector<Array> arrays;
  while (in.remaining() >= 8) {
    const Tag tag = read_tag(in);
    if (tag.type == miMATRIX) {
      ByteReader body(in.bytes(tag.nbytes), swap);
      arrays.push_back(parse_matrix(body));
    } else if (tag.type == miCOMPRESSED) {
      const auto inflated = zlib_inflate(in.bytes(tag.nbytes));
      ByteReader inner(inflated, swap);
      arrays.push_back(parse_matrix_element(inner));
    } else {
      throw Error(ErrorKind::UnsupportedElementType,
                  "top-level element of type " + std::to_string(tag.type));
    }
    const size_t rem = in.pos() % 8;
    if (rem != 0) {
      if (in.remaining() < 8 - rem) break;
      in.skip(8 - rem);
    }
  }
  return arrays;
}

}  // namespace pedtoolkit::mat
