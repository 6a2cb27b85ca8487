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

#ifndef ORTHOPROMPT_LINALG_HPP_
#define ORTHOPROMPT_LINALG_HPP_

#include <cstddef>
#include <vector>

#include "orthoprompt/matrix.hpp"

namespace orthoprompt {

/// Singular triplets with sigma_i > tol * sigma_max are retained.
inline constexpr double kDefaultRankTol = 1e-10;

/// Thin SVD truncated to numerical rank: m ~= u * diag(sigma) * v^T.
struct SvdResult {
  RowMatrix u;                 // rows x rank
  std::vector<double> sigma;   // descending, non-negative
  RowMatrix v;                 // cols x rank, orthonormal columns
  std::size_t rank = 0;
};

/// Throws kInvalidMatrix on non-finite input or tol outside (0, 1), and
/// kNumericalFailure if the decomposition does not converge.
SvdResult svd(const EmbeddingMatrix& m, double tol = kDefaultRankTol);

/// Orthonormal basis of the row space of a concept matrix.
///
/// The basis vectors are stored as rows (rank x dim), so the projector onto the
/// subspace is basis^T * basis and acts on row vectors from the right. A
/// rank-0 basis is valid and projects everything to zero.
class ProjectionBasis {
 public:
  ProjectionBasis(RowMatrix basis, std::size_t dim, double tol);

  static ProjectionBasis empty(std::size_t dim, double tol = kDefaultRankTol);

  const RowMatrix& basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return static_cast<std::size_t>(basis_.rows()); }
  double tol() const noexcept { return tol_; }

  /// Materialized dim x dim projector. Exactly symmetric: the upper triangle
  /// is computed and mirrored.
  RowMatrix projector() const;

 private:
  RowMatrix basis_;
  std::size_t dim_;
  double tol_;
};

ProjectionBasis projection_basis(const EmbeddingMatrix& concepts,
                                 double tol = kDefaultRankTol);

/// m * P. Throws kShapeMismatch when m.cols() != basis.dim().
EmbeddingMatrix project(const EmbeddingMatrix& m, const ProjectionBasis& basis);

/// m * (I - P).
EmbeddingMatrix project_complement(const EmbeddingMatrix& m,
                                   const ProjectionBasis& basis);

}  // namespace orthoprompt

#endif  // ORTHOPROMPT_LINALG_HPP_
