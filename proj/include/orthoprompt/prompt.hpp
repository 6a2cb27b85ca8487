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

#ifndef ORTHOPROMPT_PROMPT_HPP_
#define ORTHOPROMPT_PROMPT_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "orthoprompt/matrix.hpp"

namespace orthoprompt {

/// Half-open token range [start, end) into the concatenated prompt.
struct TokenSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - start; }
  bool contains(std::size_t token) const noexcept {
    return token >= start && token < end;
  }
  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

struct Segment {
  std::string label;
  TokenSpan span;
};

/// Concatenated prompt: an identity segment followed by one or more frame
/// segments, laid out contiguously from token 0.
class PromptLayout {
 public:
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::size_t total_tokens() const noexcept { return total_tokens_; }
  std::size_t frame_count() const noexcept { return segments_.size() - 1; }

  const Segment& identity() const { return segments_.front(); }
  /// Frames are numbered 1..frame_count().
  const Segment& frame(std::size_t j) const;

 private:
  friend PromptLayout build_layout(std::span<const std::size_t>,
                                   std::span<const std::string>);
  std::vector<Segment> segments_;
  std::size_t total_tokens_ = 0;
};

/// Throws kEmptySegment for a zero length, kMissingFrames for fewer than two
/// segments, kDuplicateLabel for repeated labels and kShapeMismatch when the
/// label count differs from the length count.
PromptLayout build_layout(std::span<const std::size_t> segment_lengths,
                          std::span<const std::string> labels);

/// Labels default to "P0", "P1", ...
PromptLayout build_layout(std::span<const std::size_t> segment_lengths);

/// Express set is the identity plus the current frame; every other frame is
/// suppressed.
struct FramePartition {
  std::size_t frame_index = 0;
  std::vector<TokenSpan> express_spans;   // {identity, frame_index}
  std::vector<TokenSpan> suppress_spans;  // remaining frames, in prompt order

  const TokenSpan& identity_span() const { return express_spans.front(); }
  const TokenSpan& frame_span() const { return express_spans.back(); }
  std::size_t express_tokens() const;
  std::size_t suppress_tokens() const;
};

/// Throws kInvalidFrame unless 1 <= j <= layout.frame_count().
FramePartition partition(const PromptLayout& layout, std::size_t j);

/// Stacks the rows covered by spans, in span order. Throws kShapeMismatch for
/// a span reaching past m.rows() and kEmptySegment if no rows are selected.
EmbeddingMatrix slice(const EmbeddingMatrix& m, std::span<const TokenSpan> spans);

}  // namespace orthoprompt

#endif  // ORTHOPROMPT_PROMPT_HPP_
