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

namespace pedtoolkit {

// Norpix-style ".seq" video container as used by the Caltech pedestrian
// dataset: a 1024-byte little-endian header followed by length-prefixed
// JPEG frame records. Field offsets are documented in docs/formats.md and
// frozen by golden-byte tests.

inline constexpr uint32_t kSeqMagic = 0xFEED;
inline constexpr size_t kSeqHeaderSize = 1024;

/// JPEG-compressed image format codes (monochrome / color). Anything else is
/// rejected at open; silent misreads are worse than hard errors.
inline constexpr uint32_t kSeqFormatJpegMono = 102;
inline constexpr uint32_t kSeqFormatJpegColor = 201;

bool seq_format_supported(uint32_t image_format);

struct SeqHeader {
  uint32_t magic = kSeqMagic;
  int32_t version = 3;
  std::string description;  // at most 256 characters (stored as UTF-16LE)
  uint32_t width = 0;
  uint32_t height = 0;
  uint32_t bit_depth = 24;
  uint32_t bit_depth_real = 8;
  uint32_t image_size_bytes = 0;  // uncompressed frame size hint, opaque here
  uint32_t image_format = kSeqFormatJpegColor;
  uint32_t frame_count = 0;
  uint32_t true_image_size = 0;
  double fps = 30.0;
};

struct FrameIndexEntry {
  uint64_t payload_offset = 0;  // absolute offset of the JPEG bytes
  uint32_t payload_size = 0;
};

struct FrameRecord {
  size_t index = 0;
  uint64_t byte_offset = 0;  // == payload_offset of the index entry
  uint32_t payload_size = 0;
  uint32_t ts_seconds = 0;
  uint16_t ts_millis = 0;
  std::span<const uint8_t> payload;  // view into the owning SeqFile buffer
};

/// Parsed seq container. Owns the file bytes; frame reads are random access
/// through the index and safe from multiple threads.
class SeqFile {
 public:
  static SeqFile open(std::vector<uint8_t> bytes);

  const SeqHeader& header() const noexcept { return header_; }
  const std::vector<FrameIndexEntry>& index() const noexcept { return index_; }
  size_t frame_count() const noexcept { return index_.size(); }
  /// Trailer bytes between one record's payload and the next record,
  /// detected per file (8 for files written by this toolkit).
  uint32_t record_trailer_size() const noexcept { return trailer_; }

  FrameRecord frame(size_t i) const;

 private:
  SeqFile() = default;

  std::vector<uint8_t> bytes_;
  SeqHeader header_;
  std::vector<FrameIndexEntry> index_;
  uint32_t trailer_ = 8;
};

/// Parse a seq container. Errors: BadMagic, BadHeader, UnsupportedFormat,
/// Truncated, BadRecord, FrameCountMismatch.
SeqFile open_seq(std::vector<uint8_t> bytes);

/// Random access to one frame. Errors: IndexOutOfRange.
FrameRecord read_frame(const SeqFile& seq, size_t i);

/// Serialize a seq container (test fixtures and small exports). The header
/// frame_count must equal payloads.size() (CountMismatch) and each payload
/// must start with the JPEG SOI marker (InvalidArgument). Timestamps are
/// synthesized from the header fps.
std::vector<uint8_t> write_seq(const SeqHeader& header,
                               const std::vector<std::vector<uint8_t>>& payloads);

}  // namespace pedtoolkit
