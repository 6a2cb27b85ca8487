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

#include "orthoprompt/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "orthoprompt/error.hpp"

namespace orthoprompt {
namespace {

void check_dims(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::kInvalidMatrix,
                "matrix must have at least one row and one column, got " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
  check_dims(rows, cols);
  data_.assign(rows * cols, 0.0);
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t cols,
                                 std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  check_dims(rows, cols);
  if (data_.size() != rows * cols) {
    throw Error(ErrorKind::kInvalidMatrix,
                "payload holds " + std::to_string(data_.size()) +
                    " values, expected " + std::to_string(rows * cols));
  }
  if (!all_finite()) {
    throw Error(ErrorKind::kInvalidMatrix, "matrix contains NaN or Inf");
  }
}

EmbeddingMatrix::EmbeddingMatrix(const RowMatrix& m)
    : EmbeddingMatrix(static_cast<std::size_t>(m.rows()),
                      static_cast<std::size_t>(m.cols()),
                      std::vector<double>(m.data(), m.data() + m.size())) {}

EmbeddingMatrix EmbeddingMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t d = n == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(n * d);
  for (const auto& r : rows) {
    if (r.size() != d) {
      throw Error(ErrorKind::kInvalidMatrix, "ragged row list");
    }
    data.insert(data.end(), r.begin(), r.end());
  }
  return EmbeddingMatrix(n, d, std::move(data));
}

double EmbeddingMatrix::frobenius_norm() const { return norm(data_); }

bool EmbeddingMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double frobenius_dot(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::kShapeMismatch, "frobenius_dot operands differ in shape");
  }
  return dot(a.data(), b.data());
}

double max_abs_diff(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::kShapeMismatch, "max_abs_diff operands differ in shape");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

}  // namespace orthoprompt
