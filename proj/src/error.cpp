// Copyright 2026 The Orthoprompt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "orthoprompt/error.hpp"

namespace orthoprompt {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidMatrix: return "InvalidMatrix";
    case ErrorKind::kNumericalFailure: return "NumericalFailure";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kEmptySegment: return "EmptySegment";
    case ErrorKind::kMissingFrames: return "MissingFrames";
    case ErrorKind::kInvalidFrame: return "InvalidFrame";
    case ErrorKind::kDuplicateLabel: return "DuplicateLabel";
    case ErrorKind::kMissingSpans: return "MissingSpans";
    case ErrorKind::kInvalidToken: return "InvalidToken";
    case ErrorKind::kDegenerateInput: return "DegenerateInput";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kFormatError: return "FormatError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(error_name(kind)) + ": " + message),
      kind_(kind),
      detail_(message) {}

}  // namespace orthoprompt
