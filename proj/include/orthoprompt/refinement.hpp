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

#ifndef ORTHOPROMPT_REFINEMENT_HPP_
#define ORTHOPROMPT_REFINEMENT_HPP_

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "orthoprompt/linalg.hpp"
#include "orthoprompt/matrix.hpp"
#include "orthoprompt/prompt.hpp"

namespace orthoprompt {

/// dual:         X' = X - alpha * purify(S, E)
/// single:       X' = X - alpha * S
/// dual_rescale: dual, then suppress-span rows scaled by 1 - alpha * (1 - beta)
/// rescale_only: no projection; current-frame rows scaled by 1 / beta and
///               suppress-span rows by beta
enum class RefinementMode { kDual, kSingle, kDualRescale, kRescaleOnly };

/// per_token rejects each row of S against the matching row of E; flattened
/// treats both matrices as one vector under the Frobenius inner product.
enum class Granularity { kPerToken, kFlattened };

std::string_view to_string(RefinementMode mode) noexcept;
std::string_view to_string(Granularity granularity) noexcept;
/// Accepts both "dual_rescale" and "dual-rescale" spellings.
std::optional<RefinementMode> parse_mode(std::string_view text);
std::optional<Granularity> parse_granularity(std::string_view text);

inline constexpr double kDefaultEpsilon = 1e-12;

struct RefinementConfig {
  double alpha = 1.0;
  RefinementMode mode = RefinementMode::kDual;
  Granularity granularity = Granularity::kPerToken;
  double rescale_factor = 0.5;
  double epsilon = kDefaultEpsilon;
  double tol = kDefaultRankTol;

  /// Throws kInvalidConfig.
  void validate() const;
};

struct RefinementDiagnostics {
  /// <S'_i, E_i> for every row.
  std::vector<double> row_inner_products;
  /// Rows whose ||E_i||^2 fell under epsilon and passed S through unchanged.
  std::vector<bool> guarded_rows;
  double frobenius_inner_product = 0.0;
  bool flattened_guarded = false;
  std::size_t express_rank = 0;
  std::size_t suppress_rank = 0;
};

struct RefinementDecomposition {
  EmbeddingMatrix e;          // express component X P_exp
  EmbeddingMatrix s;          // suppress component X P_sup
  EmbeddingMatrix s_pure;     // S after rejection against E (S itself in single mode)
  EmbeddingMatrix x_refined;  // X'
  RefinementDiagnostics diagnostics;
};

struct Decomposition {
  EmbeddingMatrix e;
  EmbeddingMatrix s;
};

Decomposition decompose(const EmbeddingMatrix& x, const ProjectionBasis& express,
                        const ProjectionBasis& suppress);

/// Orthogonal rejection of s against e. Rows (or, flattened, the whole matrix)
/// with ||e||^2 <= epsilon are returned unchanged.
EmbeddingMatrix purify(const EmbeddingMatrix& s, const EmbeddingMatrix& e,
                       Granularity granularity = Granularity::kPerToken,
                       double epsilon = kDefaultEpsilon);

/// The rescale modes need the token spans of the active frame and throw
/// kMissingSpans when `spans` is empty.
RefinementDecomposition refine(const EmbeddingMatrix& x, const ProjectionBasis& express,
                               const ProjectionBasis& suppress,
                               const RefinementConfig& cfg,
                               const std::optional<FramePartition>& spans = std::nullopt);

/// Largest normalized |<S', E>| over rows not caught by the epsilon guard
/// (per_token), or the normalized global Frobenius inner product (flattened).
double orthogonality_residual(const RefinementDecomposition& d,
                              Granularity granularity, double epsilon);

/// Everything one refinement run needs: the full embedding, the concept
/// matrices the bases were built from, and optionally the frame partition.
struct RefinementProblem {
  EmbeddingMatrix x;
  EmbeddingMatrix express_concept;
  std::optional<EmbeddingMatrix> suppress_concept;  // empty for one-frame prompts
  ProjectionBasis express_basis;
  ProjectionBasis suppress_basis;
  std::optional<FramePartition> spans;

  /// Concept matrices encoded separately from x.
  static RefinementProblem from_concepts(EmbeddingMatrix x, EmbeddingMatrix express,
                                         std::optional<EmbeddingMatrix> suppress,
                                         double tol = kDefaultRankTol,
                                         std::optional<FramePartition> spans = std::nullopt);

  /// Concept matrices sliced out of x along the partition of frame j.
  static RefinementProblem from_slices(EmbeddingMatrix x, const PromptLayout& layout,
                                       std::size_t j, double tol = kDefaultRankTol);

  RefinementDecomposition run(const RefinementConfig& cfg) const;

  /// Rows the reports measure: the current frame's span when known, else all.
  std::vector<TokenSpan> target_spans() const;
};

}  // namespace orthoprompt

#endif  // ORTHOPROMPT_REFINEMENT_HPP_
