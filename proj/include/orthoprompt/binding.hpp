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

#ifndef ORTHOPROMPT_BINDING_HPP_
#define ORTHOPROMPT_BINDING_HPP_

// Entry points for foreign-language wrappers. Arrays cross the boundary as a
// pointer plus shape and element width; the caller keeps ownership and the
// values are copied into an EmbeddingMatrix before any work is done. Results
// are always returned as float64. These functions hold no state and may be
// called concurrently.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "orthoprompt/matrix.hpp"

namespace orthoprompt {

enum class ElementType { kFloat32, kFloat64 };

/// A borrowed, contiguous, row-major 2-D array.
struct ArrayRef {
  const void* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  ElementType type = ElementType::kFloat64;
};

/// Copies an ArrayRef. Null data or a zero extent is kShapeMismatch,
/// non-finite values are kInvalidMatrix.
EmbeddingMatrix from_array(const ArrayRef& a);

/// Refines x against separately encoded concept arrays. Only modes that need
/// no span information are meaningful here; the rescale modes raise
/// kMissingSpans.
EmbeddingMatrix bound_refine(const ArrayRef& x, const ArrayRef& x_exp, const ArrayRef& x_sup,
                             double alpha, std::string_view mode = "dual",
                             std::string_view granularity = "per_token");

/// Pairwise pooled cosine between consecutive segments of x.
std::vector<std::vector<std::optional<double>>> bound_entanglement(
    const ArrayRef& x, std::span<const std::size_t> segment_lengths,
    std::string_view pooling = "mean");

}  // namespace orthoprompt

#endif  // ORTHOPROMPT_BINDING_HPP_
