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

#include <stdexcept>
#include <string>

namespace pedtoolkit {

enum class ErrorKind {
  // binary containers
  BadMagic,
  BadHeader,
  BadRecord,
  Truncated,
  UnsupportedFormat,
  FrameCountMismatch,
  IndexOutOfRange,
  CountMismatch,
  // MAT / vbb
  UnsupportedElementType,
  DecompressFailure,
  MissingField,
  SchemaMismatch,
  // geometry and data operations
  DegenerateBox,
  TooFewBoxes,
  WrongArity,
  FrameMismatch,
  MissingAnnotation,
  DecodeFailure,
  EmptyCurve,
  NoClasses,
  // generic
  IoFailure,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a machine-checkable kind plus a human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pedtoolkit
