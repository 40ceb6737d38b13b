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

#include "pedtoolkit/seq.hpp"

#include <array>
#include <cmath>
#include <cstring>

#include "pedtoolkit/bytes.hpp"
#include "pedtoolkit/text.hpp"

namespace pedtoolkit {

namespace {

constexpr std::array<uint16_t, 10> kSignature = {'N', 'o', 'r', 'p', 'i', 'x', ' ', 's', 'e', 'q'};
constexpr size_t kMaxDescriptionChars = 256;

bool looks_like_jpeg(std::span<const uint8_t> bytes) {
  return bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8;
}

SeqHeader parse_header(ByteReader& in) {
  SeqHeader h;
  h.magic = in.u32();
  if (h.magic != kSeqMagic) throw Error(ErrorKind::BadMagic, "not a seq file");
  for (uint16_t expected : kSignature) {
    if (in.u16() != expected) throw Error(ErrorKind::BadMagic, "missing 'Norpix seq' signature");
  }
  in.skip(4);
  h.version = in.i32();
  const uint32_t header_size = in.u32();
  if (header_size != kSeqHeaderSize) {
    throw Error(ErrorKind::BadHeader, "header size field is " + std::to_string(header_size));
  }
  std::vector<uint16_t> descr(kMaxDescriptionChars);
  for (auto& u : descr) u = in.u16();
  size_t len = 0;
  while (len < descr.size() && descr[len] != 0) ++len;
  h.description = utf16_to_utf8(std::span<const uint16_t>(descr.data(), len));
  h.width = in.u32();
  h.height = in.u32();
  h.bit_depth = in.u32();
  h.bit_depth_real = in.u32();
  h.image_size_bytes = in.u32();
  h.image_format = in.u32();
  h.frame_count = in.u32();
  in.skip(4);  // origin, unused
  h.true_image_size = in.u32();
  h.fps = in.f64();
  if (h.width == 0 || h.height == 0) throw Error(ErrorKind::BadHeader, "zero frame dimensions");
  if (!seq_format_supported(h.image_format)) {
    throw Error(ErrorKind::UnsupportedFormat,
                "image_format " + std::to_string(h.image_format) + " is not supported");
  }
  return h;
}

// Real seq files pad each record after the 6 timestamp bytes; the pad width
// varies between writers. Probe the gap once on the first record and keep it
// for the rest of the file.
uint32_t detect_trailer(const std::vector<uint8_t>& bytes, size_t record_off, uint32_t record_len) {
  for (uint32_t gap : {8u, 16u, 24u}) {
    const size_t next = record_off + record_len + gap;
    if (next == bytes.size()) return gap;
    if (next + 6 <= bytes.size()) {
      uint32_t next_len;
      std::memcpy(&next_len, bytes.data() + next, 4);
      if (next_len >= 6 && bytes[next + 4] == 0xFF && bytes[next + 5] == 0xD8) return gap;
    }
  }
  throw Error(ErrorKind::BadRecord, "cannot determine record trailer size");
}

}  // namespace

bool seq_format_supported(uint32_t image_format) {
  return image_format == kSeqFormatJpegMono || image_format == kSeqFormatJpegColor;
}

SeqFile SeqFile::open(std::vector<uint8_t> bytes) {
  if (bytes.size() < kSeqHeaderSize) throw Error(ErrorKind::Truncated, "shorter than the header");
  SeqFile seq;
  ByteReader in(bytes);
  seq.header_ = parse_header(in);

  size_t off = kSeqHeaderSize;
  uint32_t trailer = 0;
  std::vector<FrameIndexEntry> index;
  while (off < bytes.size()) {
    if (off + 4 > bytes.size()) throw Error(ErrorKind::Truncated, "partial record length field");
    uint32_t record_len;
    std::memcpy(&record_len, bytes.data() + off, 4);
    // the length prefix counts itself plus the payload
    if (record_len < 6) throw Error(ErrorKind::BadRecord, "record length below minimum");
    if (off + record_len > bytes.size()) {
      throw Error(ErrorKind::Truncated, "frame " + std::to_string(index.size()) +
                                            " extends past end of file");
    }
    if (!(bytes[off + 4] == 0xFF && bytes[off + 5] == 0xD8)) {
      throw Error(ErrorKind::BadRecord,
                  "frame " + std::to_string(index.size()) + " payload lacks the JPEG SOI marker");
    }
    if (trailer == 0) trailer = detect_trailer(bytes, off, record_len);
    if (off + record_len + trailer > bytes.size()) {
      throw Error(ErrorKind::Truncated, "record trailer extends past end of file");
    }
    index.push_back({static_cast<uint64_t>(off) + 4, record_len - 4});
    off += record_len + trailer;
  }
  if (index.size() != seq.header_.frame_count) {
    throw Error(ErrorKind::FrameCountMismatch,
                "header claims " + std::to_string(seq.header_.frame_count) + " frames, found " +
                    std::to_string(index.size()));
  }
  seq.bytes_ = std::move(bytes);
  seq.index_ = std::move(index);
  seq.trailer_ = trailer == 0 ? 8 : trailer;
  return seq;
}

FrameRecord SeqFile::frame(size_t i) const {
  if (i >= index_.size()) {
    throw Error(ErrorKind::IndexOutOfRange,
                "frame " + std::to_string(i) + " of " + std::to_string(index_.size()));
  }
  const auto& entry = index_[i];
  FrameRecord rec;
  rec.index = i;
  rec.byte_offset = entry.payload_offset;
  rec.payload_size = entry.payload_size;
  rec.payload = std::span<const uint8_t>(bytes_.data() + entry.payload_offset, entry.payload_size);
  const size_t ts_off = entry.payload_offset + entry.payload_size;
  std::memcpy(&rec.ts_seconds, bytes_.data() + ts_off, 4);
  std::memcpy(&rec.ts_millis, bytes_.data() + ts_off + 4, 2);
  return rec;
}

SeqFile open_seq(std::vector<uint8_t> bytes) { return SeqFile::open(std::move(bytes)); }

FrameRecord read_frame(const SeqFile& seq, size_t i) { return seq.frame(i); }

std::vector<uint8_t> write_seq(const SeqHeader& header,
                               const std::vector<std::vector<uint8_t>>& payloads) {
  if (header.frame_count != payloads.size()) {
    throw Error(ErrorKind::CountMismatch, "header frame_count " +
                                              std::to_string(header.frame_count) + " vs " +
                                              std::to_string(payloads.size()) + " payloads");
  }
  if (header.magic != kSeqMagic) throw Error(ErrorKind::InvalidArgument, "bad magic in header");
  if (header.width == 0 || header.height == 0) {
    throw Error(ErrorKind::InvalidArgument, "frame dimensions must be positive");
  }
  if (!seq_format_supported(header.image_format)) {
    throw Error(ErrorKind::UnsupportedFormat,
                "image_format " + std::to_string(header.image_format) + " is not supported");
  }
  const auto descr = utf8_to_utf16(header.description);
  if (descr.size() > kMaxDescriptionChars) {
    throw Error(ErrorKind::InvalidArgument, "description exceeds 256 characters");
  }
  for (size_t i = 0; i < payloads.size(); ++i) {
    if (!looks_like_jpeg(payloads[i])) {
      throw Error(ErrorKind::InvalidArgument,
                  "payload " + std::to_string(i) + " does not start with the JPEG SOI marker");
    }
  }

  ByteWriter out;
  out.u32(header.magic);
  for (uint16_t u : kSignature) out.u16(u);
  out.fill(4);
  out.i32(header.version);
  out.u32(static_cast<uint32_t>(kSeqHeaderSize));
  for (size_t i = 0; i < kMaxDescriptionChars; ++i) out.u16(i < descr.size() ? descr[i] : 0);
  out.u32(header.width);
  out.u32(header.height);
  out.u32(header.bit_depth);
  out.u32(header.bit_depth_real);
  out.u32(header.image_size_bytes);
  out.u32(header.image_format);
  out.u32(header.frame_count);
  out.u32(0);  // origin
  out.u32(header.true_image_size);
  out.f64(header.fps);
  out.fill(kSeqHeaderSize - out.size());

  for (size_t i = 0; i < payloads.size(); ++i) {
    const auto& p = payloads[i];
    out.u32(static_cast<uint32_t>(p.size() + 4));
    out.bytes(p);
    uint64_t total_ms = 0;
    if (header.fps > 0) total_ms = static_cast<uint64_t>(std::llround(i * 1000.0 / header.fps));
    out.u32(static_cast<uint32_t>(total_ms / 1000));
    out.u16(static_cast<uint16_t>(total_ms % 1000));
    out.fill(2);  // 8-byte trailer total
  }
  return out.take();
}

}  // namespace pedtoolkit
