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

#include "pedtoolkit/text.hpp"

namespace pedtoolkit {

std::string utf16_to_utf8(std::span<const uint16_t> units) {
  std::string out;
  out.reserve(units.size());
  for (uint16_t u : units) {
    if (u >= 0xD800 && u <= 0xDFFF) {
      out.push_back('?');
    } else if (u < 0x80) {
      out.push_back(static_cast<char>(u));
    } else if (u < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (u >> 6)));
      out.push_back(static_cast<char>(0x80 | (u & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xE0 | (u >> 12)));
      out.push_back(static_cast<char>(0x80 | ((u >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (u & 0x3F)));
    }
  }
  return out;
}

std::vector<uint16_t> utf8_to_utf16(std::string_view text) {
  std::vector<uint16_t> out;
  out.reserve(text.size());
  size_t i = 0;
  const auto byte = [&](size_t k) { return static_cast<uint8_t>(text[k]); };
  while (i < text.size()) {
    const uint8_t b0 = byte(i);
    if (b0 < 0x80) {
      out.push_back(b0);
      i += 1;
    } else if ((b0 >> 5) == 0x6 && i + 1 < text.size()) {
      out.push_back(static_cast<uint16_t>(((b0 & 0x1F) << 6) | (byte(i + 1) & 0x3F)));
      i += 2;
    } else if ((b0 >> 4) == 0xE && i + 2 < text.size()) {
      out.push_back(static_cast<uint16_t>(((b0 & 0x0F) << 12) | ((byte(i + 1) & 0x3F) << 6) |
                                          (byte(i + 2) & 0x3F)));
      i += 3;
    } else {
      // non-BMP or malformed sequence
      out.push_back('?');
      i += (b0 >> 3) == 0x1E ? 4 : 1;
    }
  }
  return out;
}

}  // namespace pedtoolkit
