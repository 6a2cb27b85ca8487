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

#include "orthoprompt/binding.hpp"

#include <utility>
#include <string>

#include "orthoprompt/error.hpp"
#include "orthoprompt/linalg.hpp"
#include "orthoprompt/metrics.hpp"
#include "orthoprompt/prompt.hpp"
#include "orthoprompt/refinement.hpp"

namespace orthoprompt {

EmbeddingMatrix from_array(const ArrayRef& a) {
  if (a.data == nullptr || a.rows == 0 || a.cols == 0) {
    throw Error(ErrorKind::kShapeMismatch, "array must be non-null with both extents >= 1");
  }
  std::vector<double> values(a.rows * a.cols);
  if (a.type == ElementType::kFloat32) {
    const auto* p = static_cast<const float*>(a.data);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = p[i];
  } else {
    const auto* p = static_cast<const double*>(a.data);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = p[i];
  }
  return EmbeddingMatrix(a.rows, a.cols, std::move(values));
}

EmbeddingMatrix bound_refine(const ArrayRef& x, const ArrayRef& x_exp, const ArrayRef& x_sup,
                             double alpha, std::string_view mode,
                             std::string_view granularity) {
  RefinementConfig cfg;
  const auto m = parse_mode(mode);
  if (!m) throw Error(ErrorKind::kInvalidConfig, "unknown mode '" + std::string(mode) + "'");
  const auto g = parse_granularity(granularity);
  if (!g) {
    throw Error(ErrorKind::kInvalidConfig,
                "unknown granularity '" + std::string(granularity) + "'");
  }
  cfg.alpha = alpha;
  cfg.mode = *m;
  cfg.granularity = *g;
  cfg.validate();

  const EmbeddingMatrix xm = from_array(x);
  const EmbeddingMatrix em = from_array(x_exp);
  const EmbeddingMatrix sm = from_array(x_sup);
  if (em.cols() != xm.cols() || sm.cols() != xm.cols()) {
    throw Error(ErrorKind::kShapeMismatch, "concept arrays must match the width of x");
  }
  return refine(xm, projection_basis(em, cfg.tol), projection_basis(sm, cfg.tol), cfg)
      .x_refined;
}

std::vector<std::vector<std::optional<double>>> bound_entanglement(
    const ArrayRef& x, std::span<const std::size_t> segment_lengths,
    std::string_view pooling) {
  const auto p = parse_pooling(pooling);
  if (!p) throw Error(ErrorKind::kInvalidConfig, "unknown pooling '" + std::string(pooling) + "'");
  const EmbeddingMatrix xm = from_array(x);
  const PromptLayout layout = build_layout(segment_lengths);
  if (layout.total_tokens() != xm.rows()) {
    throw Error(ErrorKind::kShapeMismatch, "segment lengths do not cover the rows of x");
  }
  return entanglement_report(xm, layout, *p).pairwise;
}

}  // namespace orthoprompt
