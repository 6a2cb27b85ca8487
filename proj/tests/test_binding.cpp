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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "orthoprompt/binding.hpp"
#include "orthoprompt/error.hpp"
#include "orthoprompt/refinement.hpp"

namespace orthoprompt {
namespace {

ArrayRef ref(const std::vector<double>& v, std::size_t rows, std::size_t cols) {
  return {v.data(), rows, cols, ElementType::kFloat64};
}

ArrayRef ref(const std::vector<float>& v, std::size_t rows, std::size_t cols) {
  return {v.data(), rows, cols, ElementType::kFloat32};
}

std::string error_name_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return std::string(e.name());
  }
  return "none";
}

TEST(Binding, HandExample) {
  const std::vector<double> x{1, 1}, e{1, 0}, s{1, 1};
  EXPECT_EQ(bound_refine(ref(x, 1, 2), ref(e, 1, 2), ref(s, 1, 2), 1.0),
            EmbeddingMatrix::from_rows({{1, 0}}));
}

TEST(Binding, AlphaZeroReturnsInput) {
  const std::vector<double> x{0.25, -3, 7, 1e-3}, e{1, 2, 3, 4}, s{4, 3, 2, 1};
  EXPECT_EQ(bound_refine(ref(x, 2, 2), ref(e, 2, 2), ref(s, 2, 2), 0.0),
            EmbeddingMatrix(2, 2, {0.25, -3, 7, 1e-3}));
}

TEST(Binding, Float32InputsWidenExactly) {
  const std::vector<float> x{1, 1}, e{1, 0}, s{1, 1};
  EXPECT_EQ(bound_refine(ref(x, 1, 2), ref(e, 1, 2), ref(s, 1, 2), 1.0),
            EmbeddingMatrix::from_rows({{1, 0}}));
  const std::vector<float> odd{0.1f};
  EXPECT_EQ(from_array(ref(odd, 1, 1))(0, 0), static_cast<double>(0.1f));
}

TEST(Binding, MatchesCoreOnRandomInstances) {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 100; ++t) {
    const std::size_t dim = 2 + rng() % 30;
    const auto x = testing::gaussian(rng, 1 + rng() % 10, dim);
    const auto e = testing::gaussian(rng, 1 + rng() % 5, dim);
    const auto s = testing::gaussian(rng, 1 + rng() % 5, dim);
    const double alpha = static_cast<double>(rng() % 11) / 10.0;
    auto as_ref = [](const EmbeddingMatrix& m) {
      return ArrayRef{m.data().data(), m.rows(), m.cols(), ElementType::kFloat64};
    };
    RefinementConfig cfg;
    cfg.alpha = alpha;
    const auto core =
        refine(x, projection_basis(e), projection_basis(s), cfg).x_refined;
    EXPECT_LE(max_abs_diff(bound_refine(as_ref(x), as_ref(e), as_ref(s), alpha), core), 1e-7);
  }
}

TEST(Binding, ErrorsCarryTaxonomyNames) {
  const std::vector<double> x{1, 1}, narrow{1}, nan{std::nan("")};
  EXPECT_EQ(error_name_of([&] { bound_refine(ref(x, 1, 2), ref(narrow, 1, 1), ref(x, 1, 2), 1); }),
            "ShapeMismatch");
  EXPECT_EQ(error_name_of([&] { from_array(ref(nan, 1, 1)); }), "InvalidMatrix");
  EXPECT_EQ(error_name_of([&] { from_array(ArrayRef{}); }), "ShapeMismatch");
  EXPECT_EQ(error_name_of([&] { bound_refine(ref(x, 1, 2), ref(x, 1, 2), ref(x, 1, 2), 2.0); }),
            "InvalidConfig");
  EXPECT_EQ(error_name_of([&] {
              bound_refine(ref(x, 1, 2), ref(x, 1, 2), ref(x, 1, 2), 1.0, "rescale_only");
            }),
            "MissingSpans");
  EXPECT_EQ(error_name_of([&] {
              const std::vector<std::size_t> lengths{1};
              bound_entanglement(ref(x, 1, 2), lengths);
            }),
            "MissingFrames");
}

TEST(Binding, EntanglementMirrorsReport) {
  const std::vector<double> x{1, 0, 2, 0, 0, 5};
  const std::vector<std::size_t> lengths{2, 1};
  const auto pairwise = bound_entanglement(ref(x, 3, 2), lengths);
  ASSERT_EQ(pairwise.size(), 2u);
  EXPECT_NEAR(*pairwise[0][1], 0.0, 1e-12);
  EXPECT_NEAR(*pairwise[1][1], 1.0, 1e-12);
  const std::vector<std::size_t> wrong{1, 1};
  EXPECT_THROW(bound_entanglement(ref(x, 3, 2), wrong), Error);
}

TEST(ErrorTaxonomy, NamesAreStable) {
  const std::vector<std::pair<ErrorKind, std::string>> expected{
      {ErrorKind::kInvalidMatrix, "InvalidMatrix"},
      {ErrorKind::kNumericalFailure, "NumericalFailure"},
      {ErrorKind::kShapeMismatch, "ShapeMismatch"},
      {ErrorKind::kEmptySegment, "EmptySegment"},
      {ErrorKind::kMissingFrames, "MissingFrames"},
      {ErrorKind::kInvalidFrame, "InvalidFrame"},
      {ErrorKind::kDuplicateLabel, "DuplicateLabel"},
      {ErrorKind::kMissingSpans, "MissingSpans"},
      {ErrorKind::kInvalidToken, "InvalidToken"},
      {ErrorKind::kDegenerateInput, "DegenerateInput"},
      {ErrorKind::kInvalidConfig, "InvalidConfig"},
      {ErrorKind::kFormatError, "FormatError"},
  };
  for (const auto& [kind, name] : expected) {
    EXPECT_EQ(error_name(kind), name);
    const Error e(kind, "detail");
    EXPECT_EQ(std::string(e.what()), name + ": detail");
  }
}

}  // namespace
}  // namespace orthoprompt
