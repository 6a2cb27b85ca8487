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

#include "orthoprompt/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "orthoprompt/error.hpp"

namespace orthoprompt {
namespace {

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorKind::kDegenerateInput, "pooled vector is zero");
  }
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

std::optional<double> try_cosine(std::span<const double> a, std::span<const double> b) {
  if (norm(a) == 0.0 || norm(b) == 0.0) return std::nullopt;
  return cosine(a, b);
}

}  // namespace

std::string_view to_string(Pooling pooling) noexcept {
  return pooling == Pooling::kMean ? "mean" : "last_token";
}

std::optional<Pooling> parse_pooling(std::string_view text) {
  if (text == "mean") return Pooling::kMean;
  if (text == "last_token" || text == "last-token" || text == "last") {
    return Pooling::kLastToken;
  }
  return std::nullopt;
}

std::vector<double> pool(const EmbeddingMatrix& m, std::span<const TokenSpan> spans,
                         Pooling pooling) {
  std::vector<double> out(m.cols(), 0.0);
  std::size_t count = 0;
  const TokenSpan* last = nullptr;
  for (const auto& s : spans) {
    if (s.end > m.rows() || s.start > s.end) {
      throw Error(ErrorKind::kShapeMismatch, "pooling span outside matrix");
    }
    if (s.size() > 0) last = &s;
    count += s.size();
  }
  if (count == 0) {
    throw Error(ErrorKind::kDegenerateInput, "pooling over zero rows");
  }
  if (pooling == Pooling::kLastToken) {
    const auto row = m.row(last->end - 1);
    std::copy(row.begin(), row.end(), out.begin());
    return out;
  }
  for (const auto& s : spans) {
    for (std::size_t r = s.start; r < s.end; ++r) {
      const auto row = m.row(r);
      for (std::size_t c = 0; c < out.size(); ++c) out[c] += row[c];
    }
  }
  for (double& v : out) v /= static_cast<double>(count);
  return out;
}

std::vector<double> pool(const EmbeddingMatrix& m, Pooling pooling) {
  const TokenSpan all[] = {{0, m.rows()}};
  return pool(m, all, pooling);
}

double pooled_cosine(const EmbeddingMatrix& a, const EmbeddingMatrix& b, Pooling pooling) {
  if (a.cols() != b.cols()) {
    throw Error(ErrorKind::kShapeMismatch, "pooled_cosine operands differ in width");
  }
  return cosine(pool(a, pooling), pool(b, pooling));
}

EntanglementReport entanglement_report(const EmbeddingMatrix& x,
                                       const PromptLayout& layout, Pooling pooling) {
  if (layout.total_tokens() != x.rows()) {
    throw Error(ErrorKind::kShapeMismatch,
                "layout covers " + std::to_string(layout.total_tokens()) +
                    " tokens but the embedding has " + std::to_string(x.rows()) + " rows");
  }
  const auto& segments = layout.segments();
  const std::size_t n = segments.size();

  EntanglementReport report;
  report.pooling = pooling;
  std::vector<std::vector<double>> pooled;
  for (const auto& seg : segments) {
    report.labels.push_back(seg.label);
    const TokenSpan one[] = {seg.span};
    pooled.push_back(pool(x, one, pooling));
    report.per_segment_norms.push_back(norm(pooled.back()));
  }
  report.pairwise.assign(n, std::vector<std::optional<double>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto c = try_cosine(pooled[i], pooled[j]);
      report.pairwise[i][j] = c;
      report.pairwise[j][i] = c;
    }
  }
  return report;
}

double subspace_energy(const EmbeddingMatrix& m, std::span<const TokenSpan> spans,
                       const ProjectionBasis& basis) {
  if (basis.rank() == 0) return 0.0;
  const EmbeddingMatrix projected = project(m, basis);
  double sq = 0.0;
  for (const auto& s : spans) {
    for (std::size_t r = s.start; r < s.end; ++r) {
      const auto row = projected.row(r);
      sq += dot(row, row);
    }
  }
  return std::sqrt(sq);
}

bool express_preserved(const EmbeddingMatrix& x, const RefinementDecomposition& d,
                       Granularity granularity, double epsilon, double rel_tol) {
  const EmbeddingMatrix& xr = d.x_refined;
  if (granularity == Granularity::kFlattened) {
    const double before = frobenius_dot(x, d.e);
    const double after = frobenius_dot(xr, d.e);
    return std::abs(after - before) <= rel_tol * (std::abs(before) + epsilon);
  }
  for (std::size_t r = 0; r < x.rows(); ++r) {
    if (d.diagnostics.guarded_rows[r]) continue;
    const double before = dot(x.row(r), d.e.row(r));
    const double after = dot(xr.row(r), d.e.row(r));
    if (std::abs(after - before) > rel_tol * (std::abs(before) + epsilon)) return false;
  }
  return true;
}

ModeReport evaluate_baseline(const RefinementProblem& problem) {
  const auto spans = problem.target_spans();
  ModeReport row;
  row.mode = "none";
  row.suppress_energy_before = subspace_energy(problem.x, spans, problem.suppress_basis);
  row.express_energy_before = subspace_energy(problem.x, spans, problem.express_basis);
  row.suppress_energy_after = row.suppress_energy_before;
  row.express_energy_after = row.express_energy_before;
  const auto target = pool(problem.x, spans, Pooling::kMean);
  row.express_cosine_before = try_cosine(target, pool(problem.express_concept, Pooling::kMean));
  row.express_cosine_after = row.express_cosine_before;
  if (problem.suppress_concept) {
    row.suppress_cosine_before =
        try_cosine(target, pool(*problem.suppress_concept, Pooling::kMean));
    row.suppress_cosine_after = row.suppress_cosine_before;
  }
  row.express_rank = problem.express_basis.rank();
  row.suppress_rank = problem.suppress_basis.rank();
  return row;
}

ModeReport evaluate(const RefinementProblem& problem, const RefinementConfig& cfg) {
  ModeReport row = evaluate_baseline(problem);
  const RefinementDecomposition d = problem.run(cfg);
  const auto spans = problem.target_spans();

  row.mode = std::string(to_string(cfg.mode));
  row.alpha = cfg.alpha;
  row.granularity = cfg.granularity;
  row.rescale_factor = cfg.rescale_factor;
  row.suppress_energy_after = subspace_energy(d.x_refined, spans, problem.suppress_basis);
  row.express_energy_after = subspace_energy(d.x_refined, spans, problem.express_basis);
  row.express_preserved = express_preserved(problem.x, d, cfg.granularity, cfg.epsilon);
  row.orthogonality_max_residual = orthogonality_residual(d, cfg.granularity, cfg.epsilon);

  const auto target = pool(d.x_refined, spans, Pooling::kMean);
  row.express_cosine_after = try_cosine(target, pool(problem.express_concept, Pooling::kMean));
  if (problem.suppress_concept) {
    row.suppress_cosine_after =
        try_cosine(target, pool(*problem.suppress_concept, Pooling::kMean));
  }
  return row;
}

RefinementReport refinement_report(const RefinementProblem& problem,
                                   std::span<const RefinementConfig> cfgs) {
  const bool has_dual = std::any_of(cfgs.begin(), cfgs.end(), [](const auto& c) {
    return c.mode == RefinementMode::kDual;
  });
  if (!has_dual) {
    throw Error(ErrorKind::kInvalidConfig, "a refinement report needs a dual-mode row");
  }
  RefinementReport report;
  report.frame_index = problem.spans ? problem.spans->frame_index : 0;
  report.rows.push_back(evaluate_baseline(problem));
  for (const auto& cfg : cfgs) report.rows.push_back(evaluate(problem, cfg));
  return report;
}

RefinementReport refinement_report(const EmbeddingMatrix& x, const PromptLayout& layout,
                                   std::size_t j, std::span<const RefinementConfig> cfgs) {
  double tol = kDefaultRankTol;
  if (!cfgs.empty()) tol = cfgs.front().tol;
  return refinement_report(RefinementProblem::from_slices(x, layout, j, tol), cfgs);
}

}  // namespace orthoprompt
