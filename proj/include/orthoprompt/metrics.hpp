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

#ifndef ORTHOPROMPT_METRICS_HPP_
#define ORTHOPROMPT_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orthoprompt/linalg.hpp"
#include "orthoprompt/matrix.hpp"
#include "orthoprompt/prompt.hpp"
#include "orthoprompt/refinement.hpp"

namespace orthoprompt {

enum class Pooling { kMean, kLastToken };

std::string_view to_string(Pooling pooling) noexcept;
std::optional<Pooling> parse_pooling(std::string_view text);

/// Reduces rows to one vector: their mean, or the final row.
std::vector<double> pool(const EmbeddingMatrix& m, Pooling pooling);
std::vector<double> pool(const EmbeddingMatrix& m, std::span<const TokenSpan> spans,
                         Pooling pooling);

/// Cosine between pooled vectors, clamped to [-1, 1]. Throws kShapeMismatch on
/// differing widths and kDegenerateInput if either pooled vector is zero.
double pooled_cosine(const EmbeddingMatrix& a, const EmbeddingMatrix& b,
                     Pooling pooling = Pooling::kMean);

struct EntanglementReport {
  Pooling pooling = Pooling::kMean;
  std::vector<std::string> labels;
  /// Symmetric; nullopt where either segment pools to zero.
  std::vector<std::vector<std::optional<double>>> pairwise;
  std::vector<double> per_segment_norms;
};

EntanglementReport entanglement_report(const EmbeddingMatrix& x,
                                       const PromptLayout& layout,
                                       Pooling pooling = Pooling::kMean);

/// Frobenius norm of the rows in spans projected onto basis.
double subspace_energy(const EmbeddingMatrix& m, std::span<const TokenSpan> spans,
                       const ProjectionBasis& basis);

inline constexpr double kExpressPreservationTol = 1e-5;

/// One row of a refinement report. Energies and cosines are measured on the
/// current frame's rows (all rows when no partition is known).
struct ModeReport {
  std::string mode;  // "none" or to_string(RefinementMode)
  double alpha = 0.0;
  Granularity granularity = Granularity::kPerToken;
  double rescale_factor = 0.0;
  double suppress_energy_before = 0.0;
  double suppress_energy_after = 0.0;
  double express_energy_before = 0.0;
  double express_energy_after = 0.0;
  /// <X'_i, E_i> == <X_i, E_i> within kExpressPreservationTol relative, per row
  /// (per_token) or globally (flattened).
  bool express_preserved = true;
  double orthogonality_max_residual = 0.0;
  std::optional<double> express_cosine_before;
  std::optional<double> express_cosine_after;
  std::optional<double> suppress_cosine_before;
  std::optional<double> suppress_cosine_after;
  std::size_t express_rank = 0;
  std::size_t suppress_rank = 0;
};

/// Row for the unrefined embedding: after-values equal before-values.
ModeReport evaluate_baseline(const RefinementProblem& problem);
ModeReport evaluate(const RefinementProblem& problem, const RefinementConfig& cfg);

/// Checks the express-preservation property of a finished decomposition.
bool express_preserved(const EmbeddingMatrix& x, const RefinementDecomposition& d,
                       Granularity granularity, double epsilon,
                       double rel_tol = kExpressPreservationTol);

struct RefinementReport {
  std::size_t frame_index = 0;
  std::vector<ModeReport> rows;  // "none" first, then cfgs in order
};

/// Throws kInvalidConfig unless cfgs contains at least one dual config.
RefinementReport refinement_report(const RefinementProblem& problem,
                                   std::span<const RefinementConfig> cfgs);

/// Slice-mode convenience: concept matrices are cut out of x.
RefinementReport refinement_report(const EmbeddingMatrix& x, const PromptLayout& layout,
                                   std::size_t j, std::span<const RefinementConfig> cfgs);

}  // namespace orthoprompt

#endif  // ORTHOPROMPT_METRICS_HPP_
