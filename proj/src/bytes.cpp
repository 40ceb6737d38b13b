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

#include "pedtoolkit/bytes.hpp"

#include <bit>
#include <cstring>

namespace pedtoolkit {
namespace {

uint16_t bswap(uint16_t v) { return static_cast<uint16_t>((v >> 8) | (v << 8)); }

uint32_t bswap(uint32_t v) {
  return (v >> 24) | ((v >> 8) & 0x0000FF00u) | ((v << 8) & 0x00FF0000u) | (v << 24);
}

uint64_t bswap(uint64_t v) {
  return (static_cast<uint64_t>(bswap(static_cast<uint32_t>(v))) << 32) |
         bswap(static_cast<uint32_t>(v >> 32));
}

}  // namespace

void ByteReader::require(size_t n) const {
  if (n > remaining()) {
    throw Error(ErrorKind::Truncated,
                "need " + std::to_string(n) + " bytes at offset " + std::to_string(pos_) +
                    ", have " + std::to_string(remaining()));
  }
}

void ByteReader::seek(size_t pos) {
  if (pos > data_.size()) throw Error(ErrorKind::Truncated, "seek past end");
  pos_ = pos;
}

void ByteReader::skip(size_t n) {
  require(n);
  pos_ += n;
}

void ByteReader::align(size_t alignment) {
  const size_t rem = pos_ % alignment;
  if (rem != 0) skip(alignment - rem);
}

uint8_t ByteReader::u8() {
  require(1);
  return data_[pos_++];
}

uint16_t ByteReader::u16() {
  require(2);
  uint16_t v;
  std::memcpy(&v, data_.data() + pos_, 2);
  pos_ += 2;
  return swap_ ? bswap(v) : v;
}

uint32_t ByteReader::u32() {
  require(4);
  uint32_t v;
  std::memcpy(&v, data_.data() + pos_, 4);
  pos_ += 4;
  return swap_ ? bswap(v) : v;
}

uint64_t ByteReader::u64() {
  require(8);
  uint64_t v;
  std::memcpy(&v, data_.data() + pos_, 8);
  pos_ += 8;
  return swap_ ? bswap(v) : v;
}

float ByteReader::f32() { return std::bit_cast<float>(u32()); }

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

std::span<const uint8_t> ByteReader::bytes(size_t n) {
  require(n);
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

uint32_t ByteReader::peek_u32(size_t at) const {
  if (at + 4 > data_.size()) throw Error(ErrorKind::Truncated, "peek past end");
  uint32_t v;
  std::memcpy(&v, data_.data() + at, 4);
  return swap_ ? bswap(v) : v;
}

void ByteWriter::u8(uint8_t v) { out_.push_back(v); }

void ByteWriter::u16(uint16_t v) {
  if (swap_) v = bswap(v);
  const auto* p = reinterpret_cast<const uint8_t*>(&v);
  out_.insert(out_.end(), p, p + 2);
}

void ByteWriter::u32(uint32_t v) {
  if (swap_) v = bswap(v);
  const auto* p = reinterpret_cast<const uint8_t*>(&v);
  out_.insert(out_.end(), p, p + 4);
}

void ByteWriter::u64(uint64_t v) {
  if (swap_) v = bswap(v);
  const auto* p = reinterpret_cast<const uint8_t*>(&v);
  out_.insert(out_.end(), p, p + 8);
}

void ByteWriter::f64(double v) { u64(std::bit_cast<uint64_t>(v)); }

void ByteWriter::bytes(std::span<const uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

void ByteWriter::fill(size_t n, uint8_t value) { out_.insert(out_.end(), n, value); }

void ByteWriter::align(size_t alignment, uint8_t value) {
  const size_t rem = out_.size() % alignment;
  if (rem != 0) fill(alignment - rem, value);
}

void ByteWriter::patch_u32(size_t at, uint32_t v) {
  if (swap_) v = bswap(v);
  std::memcpy(out_.data() + at, &v, 4);
}

}  // namespace pedtoolkit
