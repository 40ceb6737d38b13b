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

#include "pedtoolkit/error.hpp"

namespace pedtoolkit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::BadHeader: return "BadHeader";
    case ErrorKind::BadRecord: return "BadRecord";
    case ErrorKind::Truncated: return "Truncated";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::FrameCountMismatch: return "FrameCountMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::UnsupportedElementType: return "UnsupportedElementType";
    case ErrorKind::DecompressFailure: return "DecompressFailure";
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::DegenerateBox: return "DegenerateBox";
    case ErrorKind::TooFewBoxes: return "TooFewBoxes";
    case ErrorKind::WrongArity: return "WrongArity";
    case ErrorKind::FrameMismatch: return "FrameMismatch";
    case ErrorKind::MissingAnnotation: return "MissingAnnotation";
    case ErrorKind::DecodeFailure: return "DecodeFailure";
    case ErrorKind::EmptyCurve: return "EmptyCurve";
    case ErrorKind::NoClasses: return "NoClasses";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace pedtoolkit
