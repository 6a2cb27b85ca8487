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

#include "orthoprompt/prompt.hpp"

#include <algorithm>
#include <set>

#include "orthoprompt/error.hpp"

namespace orthoprompt {

const Segment& PromptLayout::frame(std::size_t j) const {
  if (j == 0 || j > frame_count()) {
    throw Error(ErrorKind::kInvalidFrame,
                "frame " + std::to_string(j) + " outside [1, " +
                    std::to_string(frame_count()) + "]");
  }
  return segments_[j];
}

PromptLayout build_layout(std::span<const std::size_t> segment_lengths,
                          std::span<const std::string> labels) {
  if (labels.size() != segment_lengths.size()) {
    throw Error(ErrorKind::kShapeMismatch,
                std::to_string(labels.size()) + " labels for " +
                    std::to_string(segment_lengths.size()) + " segments");
  }
  if (segment_lengths.size() < 2) {
    throw Error(ErrorKind::kMissingFrames,
                "a prompt needs an identity segment and at least one frame");
  }
  std::set<std::string> seen;
  PromptLayout layout;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < segment_lengths.size(); ++i) {
    if (segment_lengths[i] == 0) {
      throw Error(ErrorKind::kEmptySegment, "segment '" + labels[i] + "' has no tokens");
    }
    if (!seen.insert(labels[i]).second) {
      throw Error(ErrorKind::kDuplicateLabel, "label '" + labels[i] + "' repeats");
    }
    layout.segments_.push_back({labels[i], {cursor, cursor + segment_lengths[i]}});
    cursor += segment_lengths[i];
  }
  layout.total_tokens_ = cursor;
  return layout;
}

PromptLayout build_layout(std::span<const std::size_t> segment_lengths) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < segment_lengths.size(); ++i) {
    labels.push_back("P" + std::to_string(i));
  }
  return build_layout(segment_lengths, labels);
}

std::size_t FramePartition::express_tokens() const {
  std::size_t n = 0;
  for (const auto& s : express_spans) n += s.size();
  return n;
}

std::size_t FramePartition::suppress_tokens() const {
  std::size_t n = 0;
  for (const auto& s : suppress_spans) n += s.size();
  return n;
}

FramePartition partition(const PromptLayout& layout, std::size_t j) {
  if (j == 0) {
    throw Error(ErrorKind::kInvalidFrame, "frame 0 is the identity prompt, not a frame");
  }
  const Segment& current = layout.frame(j);

  FramePartition out;
  out.frame_index = j;
  out.express_spans = {layout.identity().span, current.span};
  for (std::size_t k = 1; k <= layout.frame_count(); ++k) {
    if (k != j) out.suppress_spans.push_back(layout.frame(k).span);
  }
  return out;
}

EmbeddingMatrix slice(const EmbeddingMatrix& m, std::span<const TokenSpan> spans) {
  std::size_t total = 0;
  for (const auto& s : spans) {
    if (s.start > s.end || s.end > m.rows()) {
      throw Error(ErrorKind::kShapeMismatch,
                  "span [" + std::to_string(s.start) + ", " + std::to_string(s.end) +
                      ") outside a " + std::to_string(m.rows()) + "-row matrix");
    }
    total += s.size();
  }
  if (total == 0) {
    throw Error(ErrorKind::kEmptySegment, "slice selects no rows");
  }
  std::vector<double> data;
  data.reserve(total * m.cols());
  for (const auto& s : spans) {
    const auto first = m.data().begin() + static_cast<std::ptrdiff_t>(s.start * m.cols());
    const auto last = m.data().begin() + static_cast<std::ptrdiff_t>(s.end * m.cols());
    data.insert(data.end(), first, last);
  }
  return EmbeddingMatrix(total, m.cols(), std::move(data));
}

}  // namespace orthoprompt
