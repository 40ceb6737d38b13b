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
#include <string_view>
#include <vector>

namespace pedtoolkit {

/// UTF-16 code units -> UTF-8. Surrogate pairs outside the BMP are replaced
/// with '?'; container text in this toolkit is ASCII in practice.
std::string utf16_to_utf8(std::span<const uint16_t> units);

/// UTF-8 -> UTF-16 code units (BMP only, non-BMP replaced with '?').
std::vector<uint16_t> utf8_to_utf16(std::string_view text);

}  // namespace pedtoolkit
