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

#ifndef ORTHOPROMPT_ERROR_HPP_
#define ORTHOPROMPT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace orthoprompt {

/// Error taxonomy shared by the library, the CLI and any language binding.
/// The names returned by error_name() are stable and part of the public
/// contract.
enum class ErrorKind {
  kInvalidMatrix,
  kNumericalFailure,
  kShapeMismatch,
  kEmptySegment,
  kMissingFrames,
  kInvalidFrame,
  kDuplicateLabel,
  kMissingSpans,
  kInvalidToken,
  kDegenerateInput,
  kInvalidConfig,
  kFormatError,
};

std::string_view error_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }
  /// Message without the leading error name.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace orthoprompt

#endif  // ORTHOPROMPT_ERROR_HPP_
