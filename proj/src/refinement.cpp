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

#include "orthoprompt/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "orthoprompt/error.hpp"

namespace orthoprompt {
namespace {

// Differences smaller than this many ulps of the operands are rounding noise
// left over from the projections and are returned as exact zeros.
constexpr double kCancellationUlps = 16.0;

void require_same_shape(const EmbeddingMatrix& a, const EmbeddingMatrix& b,
                        const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::kShapeMismatch,
                std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                    "x" + std::to_string(b.cols()));
  }
}

// x - alpha * s, flushing results that cancel to within rounding.
EmbeddingMatrix subtract_scaled(const EmbeddingMatrix& x, double alpha,
                                const EmbeddingMatrix& s) {
  constexpr double kFloor = kCancellationUlps * std::numeric_limits<double>::epsilon();
  EmbeddingMatrix out = x;
  const auto xs = x.data();
  const auto ss = s.data();
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < x.cols(); ++c) {
      const double a = xs[r * x.cols() + c];
      const double b = alpha * ss[r * x.cols() + c];
      const double d = a - b;
      row[c] = std::abs(d) <= kFloor * (std::abs(a) + std::abs(b)) ? 0.0 : d;
    }
  }
  return out;
}

void scale_rows(EmbeddingMatrix& m, const TokenSpan& span, double factor) {
  for (std::size_t r = span.start; r < span.end; ++r) {
    for (double& v : m.row(r)) v *= factor;
  }
}

void check_spans_fit(const FramePartition& p, std::size_t rows) {
  auto fits = [rows](const TokenSpan& s) { return s.end <= rows; };
  if (!std::all_of(p.express_spans.begin(), p.express_spans.end(), fits) ||
      !std::all_of(p.suppress_spans.begin(), p.suppress_spans.end(), fits)) {
    throw Error(ErrorKind::kShapeMismatch,
                "partition spans reach past the " + std::to_string(rows) +
                    "-row embedding");
  }
}

}  // namespace

std::string_view to_string(RefinementMode mode) noexcept {
  switch (mode) {
    case RefinementMode::kDual: return "dual";
    case RefinementMode::kSingle: return "single";
    case RefinementMode::kDualRescale: return "dual_rescale";
    case RefinementMode::kRescaleOnly: return "rescale_only";
  }
  return "unknown";
}

std::string_view to_string(Granularity granularity) noexcept {
  return granularity == Granularity::kPerToken ? "per_token" : "flattened";
}

std::optional<RefinementMode> parse_mode(std::string_view text) {
  if (text == "dual") return RefinementMode::kDual;
  if (text == "single") return RefinementMode::kSingle;
  if (text == "dual_rescale" || text == "dual-rescale") return RefinementMode::kDualRescale;
  if (text == "rescale_only" || text == "rescale-only") return RefinementMode::kRescaleOnly;
  return std::nullopt;
}

std::optional<Granularity> parse_granularity(std::string_view text) {
  if (text == "per_token" || text == "per-token") return Granularity::kPerToken;
  if (text == "flattened") return Granularity::kFlattened;
  return std::nullopt;
}

void RefinementConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::kInvalidConfig, "alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorKind::kInvalidConfig, "epsilon must be positive");
  }
  if (!(rescale_factor > 0.0) || !std::isfinite(rescale_factor)) {
    throw Error(ErrorKind::kInvalidConfig, "rescale factor must be positive");
  }
  if (!(tol > 0.0 && tol < 1.0)) {
    throw Error(ErrorKind::kInvalidConfig, "rank tolerance must lie in (0, 1)");
  }
}

Decomposition decompose(const EmbeddingMatrix& x, const ProjectionBasis& express,
                        const ProjectionBasis& suppress) {
  if (express.dim() != x.cols() || suppress.dim() != x.cols()) {
    throw Error(ErrorKind::kShapeMismatch,
                "embedding dim " + std::to_string(x.cols()) + " vs express " +
                    std::to_string(express.dim()) + " / suppress " +
                    std::to_string(suppress.dim()));
  }
  return {project(x, express), project(x, suppress)};
}

EmbeddingMatrix purify(const EmbeddingMatrix& s, const EmbeddingMatrix& e,
                       Granularity granularity, double epsilon) {
  require_same_shape(s, e, "purify");
  EmbeddingMatrix out = s;

  // The rejection runs twice. When S is nearly parallel to E the first pass
  // leaves a remainder made of rounding error that is not itself orthogonal
  // to E; the second pass removes it.
  if (granularity == Granularity::kFlattened) {
    const double ee = dot(e.data(), e.data());
    if (ee <= epsilon) return out;
    for (int pass = 0; pass < 2; ++pass) {
      const double coef = dot(out.data(), e.data()) / ee;
      out.view() -= coef * e.view();
    }
    return out;
  }

  for (std::size_t r = 0; r < s.rows(); ++r) {
    const auto er = e.row(r);
    const double ee = dot(er, er);
    if (ee <= epsilon) continue;
    auto o = out.row(r);
    for (int pass = 0; pass < 2; ++pass) {
      const double coef = dot(o, er) / ee;
      for (std::size_t c = 0; c < o.size(); ++c) o[c] -= coef * er[c];
    }
  }
  return out;
}

RefinementDecomposition refine(const EmbeddingMatrix& x, const ProjectionBasis& express,
                               const ProjectionBasis& suppress,
                               const RefinementConfig& cfg,
                               const std::optional<FramePartition>& spans) {
  cfg.validate();
  const bool needs_spans = cfg.mode == RefinementMode::kDualRescale ||
                           cfg.mode == RefinementMode::kRescaleOnly;
  if (needs_spans && !spans) {
    throw Error(ErrorKind::kMissingSpans,
                std::string(to_string(cfg.mode)) + " rescales token rows and needs a frame partition");
  }
  if (spans) check_spans_fit(*spans, x.rows());

  auto [e, s] = decompose(x, express, suppress);
  EmbeddingMatrix s_pure = cfg.mode == RefinementMode::kSingle ||
                                   cfg.mode == RefinementMode::kRescaleOnly
                               ? s
                               : purify(s, e, cfg.granularity, cfg.epsilon);

  EmbeddingMatrix refined = x;
  switch (cfg.mode) {
    case RefinementMode::kDual:
    case RefinementMode::kSingle:
    case RefinementMode::kDualRescale:
      if (cfg.alpha != 0.0) refined = subtract_scaled(x, cfg.alpha, s_pure);
      break;
    case RefinementMode::kRescaleOnly:
      break;
  }
  if (cfg.mode == RefinementMode::kDualRescale && cfg.alpha != 0.0) {
    const double factor = 1.0 - cfg.alpha * (1.0 - cfg.rescale_factor);
    for (const auto& span : spans->suppress_spans) scale_rows(refined, span, factor);
  }
  if (cfg.mode == RefinementMode::kRescaleOnly) {
    scale_rows(refined, spans->frame_span(), 1.0 / cfg.rescale_factor);
    for (const auto& span : spans->suppress_spans) {
      scale_rows(refined, span, cfg.rescale_factor);
    }
  }

  RefinementDiagnostics diag;
  diag.express_rank = express.rank();
  diag.suppress_rank = suppress.rank();
  diag.row_inner_products.resize(x.rows());
  diag.guarded_rows.resize(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    diag.row_inner_products[r] = dot(s_pure.row(r), e.row(r));
    diag.guarded_rows[r] = dot(e.row(r), e.row(r)) <= cfg.epsilon;
  }
  diag.frobenius_inner_product = frobenius_dot(s_pure, e);
  diag.flattened_guarded = dot(e.data(), e.data()) <= cfg.epsilon;

  return {std::move(e), std::move(s), std::move(s_pure), std::move(refined),
          std::move(diag)};
}

double orthogonality_residual(const RefinementDecomposition& d,
                              Granularity granularity, double epsilon) {
  const auto& diag = d.diagnostics;
  if (granularity == Granularity::kFlattened) {
    if (diag.flattened_guarded) return 0.0;
    return std::abs(diag.frobenius_inner_product) /
           (d.s_pure.frobenius_norm() * d.e.frobenius_norm() + epsilon);
  }
  double worst = 0.0;
  for (std::size_t r = 0; r < d.e.rows(); ++r) {
    if (diag.guarded_rows[r]) continue;
    const double scale = norm(d.s_pure.row(r)) * norm(d.e.row(r)) + epsilon;
    worst = std::max(worst, std::abs(diag.row_inner_products[r]) / scale);
  }
  return worst;
}

RefinementProblem RefinementProblem::from_concepts(EmbeddingMatrix x,
                                                   EmbeddingMatrix express,
                                                   std::optional<EmbeddingMatrix> suppress,
                                                   double tol,
                                                   std::optional<FramePartition> spans) {
  if (express.cols() != x.cols() || (suppress && suppress->cols() != x.cols())) {
    throw Error(ErrorKind::kShapeMismatch,
                "concept matrices must share the embedding dimension " +
                    std::to_string(x.cols()));
  }
  if (spans) check_spans_fit(*spans, x.rows());
  ProjectionBasis exp_basis = projection_basis(express, tol);
  ProjectionBasis sup_basis = suppress ? projection_basis(*suppress, tol)
                                       : ProjectionBasis::empty(x.cols(), tol);
  return {std::move(x),        std::move(express),   std::move(suppress),
          std::move(exp_basis), std::move(sup_basis), std::move(spans)};
}

RefinementProblem RefinementProblem::from_slices(EmbeddingMatrix x,
                                                 const PromptLayout& layout,
                                                 std::size_t j, double tol) {
  if (layout.total_tokens() != x.rows()) {
    throw Error(ErrorKind::kShapeMismatch,
                "layout covers " + std::to_string(layout.total_tokens()) +
                    " tokens but the embedding has " + std::to_string(x.rows()) + " rows");
  }
  FramePartition p = partition(layout, j);
  EmbeddingMatrix express = slice(x, p.express_spans);
  std::optional<EmbeddingMatrix> suppress;
  if (!p.suppress_spans.empty()) suppress = slice(x, p.suppress_spans);
  return from_concepts(std::move(x), std::move(express), std::move(suppress), tol,
                       std::move(p));
}

RefinementDecomposition RefinementProblem::run(const RefinementConfig& cfg) const {
  return refine(x, express_basis, suppress_basis, cfg, spans);
}

std::vector<TokenSpan> RefinementProblem::target_spans() const {
  if (spans) return {spans->frame_span()};
  return {TokenSpan{0, x.rows()}};
}

}  // namespace orthoprompt
