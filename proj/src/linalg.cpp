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

#include "orthoprompt/linalg.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "orthoprompt/error.hpp"

namespace orthoprompt {

SvdResult svd(const EmbeddingMatrix& m, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) {
    throw Error(ErrorKind::kInvalidMatrix,
                "rank tolerance must lie in (0, 1), got " + std::to_string(tol));
  }
  if (!m.all_finite()) {
    throw Error(ErrorKind::kInvalidMatrix, "svd input contains NaN or Inf");
  }

  const Eigen::MatrixXd dense = m.view();
  Eigen::JacobiSVD<Eigen::MatrixXd> solver(dense,
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumericalFailure, "Jacobi SVD did not converge");
  }
  const Eigen::VectorXd& values = solver.singularValues();
  if (!values.allFinite()) {
    throw Error(ErrorKind::kNumericalFailure, "SVD produced non-finite singular values");
  }

  // Singular values come back sorted descending.
  const double sigma_max = values.size() > 0 ? values(0) : 0.0;
  Eigen::Index rank = 0;
  if (sigma_max > 0.0) {
    while (rank < values.size() && values(rank) > tol * sigma_max) ++rank;
  }

  SvdResult out;
  out.rank = static_cast<std::size_t>(rank);
  out.sigma.assign(values.data(), values.data() + rank);
  out.u = solver.matrixU().leftCols(rank);
  out.v = solver.matrixV().leftCols(rank);
  return out;
}

ProjectionBasis::ProjectionBasis(RowMatrix basis, std::size_t dim, double tol)
    : basis_(std::move(basis)), dim_(dim), tol_(tol) {
  if (basis_.rows() > 0 && static_cast<std::size_t>(basis_.cols()) != dim_) {
    throw Error(ErrorKind::kShapeMismatch, "basis vectors must have length dim");
  }
  if (basis_.rows() == 0) basis_.resize(0, static_cast<Eigen::Index>(dim_));
}

ProjectionBasis ProjectionBasis::empty(std::size_t dim, double tol) {
  return ProjectionBasis(RowMatrix(0, static_cast<Eigen::Index>(dim)), dim, tol);
}

RowMatrix ProjectionBasis::projector() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  RowMatrix p = RowMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < basis_.rows(); ++k) {
        acc += basis_(k, i) * basis_(k, j);
      }
      p(i, j) = acc;
      p(j, i) = acc;
    }
  }
  return p;
}

ProjectionBasis projection_basis(const EmbeddingMatrix& concepts, double tol) {
  SvdResult s = svd(concepts, tol);
  return ProjectionBasis(s.v.transpose(), concepts.cols(), tol);
}

EmbeddingMatrix project(const EmbeddingMatrix& m, const ProjectionBasis& basis) {
  if (m.cols() != basis.dim()) {
    throw Error(ErrorKind::kShapeMismatch,
                "cannot project " + std::to_string(m.cols()) +
                    "-dim rows onto a " + std::to_string(basis.dim()) +
                    "-dim subspace");
  }
  EmbeddingMatrix out(m.rows(), m.cols());
  if (basis.rank() == 0) return out;
  // (m B^T) B == m (B^T B) without forming the dim x dim projector.
  const RowMatrix coords = m.view() * basis.basis().transpose();
  out.view().noalias() = coords * basis.basis();
  return out;
}

EmbeddingMatrix project_complement(const EmbeddingMatrix& m,
                                   const ProjectionBasis& basis) {
  EmbeddingMatrix out = project(m, basis);
  out.view() = m.view() - out.view();
  return out;
}

}  // namespace orthoprompt
