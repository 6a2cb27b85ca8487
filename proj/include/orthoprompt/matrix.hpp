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

#ifndef ORTHOPROMPT_MATRIX_HPP_
#define ORTHOPROMPT_MATRIX_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace orthoprompt {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Token embeddings stacked as rows (tokens x dim), row-major.
///
/// A matrix always has at least one row and one column and holds only finite
/// values; constructors that take data enforce both and throw
/// ErrorKind::kInvalidMatrix otherwise.
class EmbeddingMatrix {
 public:
  /// Zero-filled matrix.
  EmbeddingMatrix(std::size_t rows, std::size_t cols);
  EmbeddingMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  explicit EmbeddingMatrix(const RowMatrix& m);

  static EmbeddingMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> data() const noexcept { return data_; }

  Eigen::Map<const RowMatrix> view() const {
    return {data_.data(), static_cast<Eigen::Index>(rows_),
            static_cast<Eigen::Index>(cols_)};
  }
  Eigen::Map<RowMatrix> view() {
    return {data_.data(), static_cast<Eigen::Index>(rows_),
            static_cast<Eigen::Index>(cols_)};
  }

  double frobenius_norm() const;
  bool all_finite() const;

  /// Exact element-wise equality (not bitwise: +0 == -0).
  friend bool operator==(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// Frobenius inner product of two equally shaped matrices.
double frobenius_dot(const EmbeddingMatrix& a, const EmbeddingMatrix& b);

double max_abs_diff(const EmbeddingMatrix& a, const EmbeddingMatrix& b);

}  // namespace orthoprompt

#endif  // ORTHOPROMPT_MATRIX_HPP_
