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
#include <vector>

#include "pedtoolkit/error.hpp"

namespace pedtoolkit {

/// Bounds-checked cursor over an immutable byte buffer. All multi-byte reads
/// are little-endian unless `swap` is set. Overruns throw Error{Truncated}.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data, bool swap = false)
      : data_(data), swap_(swap) {}

  size_t pos() const noexcept { return pos_; }
  size_t size() const noexcept { return data_.size(); }
  size_t remaining() const noexcept { return data_.size() - pos_; }
  bool swapped() const noexcept { return swap_; }

  void seek(size_t pos);
  void skip(size_t n);
  /// Skip padding so that pos() becomes a multiple of `alignment`.
  void align(size_t alignment);

  uint8_t u8();
  uint16_t u16();
  uint32_t u32();
  uint64_t u64();
  int8_t i8() { return static_cast<int8_t>(u8()); }
  int16_t i16() { return static_cast<int16_t>(u16()); }
  int32_t i32() { return static_cast<int32_t>(u32()); }
  int64_t i64() { return static_cast<int64_t>(u64()); }
  float f32();
  double f64();
  std::span<const uint8_t> bytes(size_t n);
  /// Peek a little/big-endian u32 at an absolute offset without moving.
  uint32_t peek_u32(size_t at) const;

 private:
  void require(size_t n) const;

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
  bool swap_ = false;
};

/// Growable output buffer with the mirror-image write interface.
class ByteWriter {
 public:
  explicit ByteWriter(bool swap = false) : swap_(swap) {}

  size_t size() const noexcept { return out_.size(); }
  std::vector<uint8_t> take() { return std::move(out_); }
  const std::vector<uint8_t>& data() const noexcept { return out_; }

  void u8(uint8_t v);
  void u16(uint16_t v);
  void u32(uint32_t v);
  void u64(uint64_t v);
  void i16(int16_t v) { u16(static_cast<uint16_t>(v)); }
  void i32(int32_t v) { u32(static_cast<uint32_t>(v)); }
  void f64(double v);
  void bytes(std::span<const uint8_t> b);
  void fill(size_t n, uint8_t value = 0);
  /// Append zero bytes until size() is a multiple of `alignment`.
  void align(size_t alignment, uint8_t value = 0);
  /// Patch a previously written little/big-endian u32 in place.
  void patch_u32(size_t at, uint32_t v);

 private:
  std::vector<uint8_t> out_;
  bool swap_ = false;
};

}  // namespace pedtoolkit
