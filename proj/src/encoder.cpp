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

#include "orthoprompt/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "orthoprompt/error.hpp"

namespace orthoprompt {
namespace {

// Positional encodings are scaled to this norm so token identity, not
// position, dominates each row.
constexpr double kPositionNorm = 0.05;

// Value and output maps are identity plus small Gaussian noise, so attention
// carries earlier token vectors forward largely unrotated. The output map is
// scaled by kAttentionGain, which sets how much context leaks into each row.
constexpr double kAttentionGain = 0.3;
constexpr double kMapNoise = 0.1;
constexpr double kMlpGain = 0.1;

// std::normal_distribution is implementation-defined; draw Gaussians from the
// raw engine output so weights are identical across standard libraries.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (cached_) {
      cached_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    cached_ = true;
    return radius * std::cos(angle);
  }

  std::vector<double> fill(std::size_t n, double stddev) {
    std::vector<double> out(n);
    for (double& v : out) v = stddev * next();
    return out;
  }

 private:
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool cached_ = false;
};

// out = w * in, w is rows x cols row-major.
void matvec(const std::vector<double>& w, std::span<const double> in,
            std::span<double> out) {
  const std::size_t cols = in.size();
  for (std::size_t r = 0; r < out.size(); ++r) {
    double acc = 0.0;
    const double* wr = w.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * in[c];
    out[r] = acc;
  }
}

}  // namespace

ToyEncoder::ToyEncoder(const EncoderConfig& cfg) : cfg_(cfg), hidden_(2 * cfg.dim) {
  if (cfg.vocab_size == 0 || cfg.dim == 0 || cfg.n_layers == 0 || cfg.n_heads == 0) {
    throw Error(ErrorKind::kInvalidConfig, "encoder sizes must be positive");
  }
  if (cfg.dim % cfg.n_heads != 0) {
    throw Error(ErrorKind::kInvalidConfig,
                "dim " + std::to_string(cfg.dim) + " is not divisible by " +
                    std::to_string(cfg.n_heads) + " heads");
  }
  if (!(cfg.temperature > 0.0) || !std::isfinite(cfg.temperature)) {
    throw Error(ErrorKind::kInvalidConfig, "temperature must be positive");
  }

  GaussianSource rng(cfg.seed);
  const std::size_t d = cfg.dim;
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  embedding_ = rng.fill(cfg.vocab_size * d, inv_sqrt_d);
  layers_.resize(cfg.n_layers);
  for (Layer& layer : layers_) {
    layer.wq = rng.fill(d * d, inv_sqrt_d);
    layer.wk = rng.fill(d * d, inv_sqrt_d);
    layer.wv = rng.fill(d * d, kMapNoise * inv_sqrt_d);
    layer.wo = rng.fill(d * d, kMapNoise * inv_sqrt_d);
    for (std::size_t r = 0; r < d; ++r) {
      layer.wv[r * d + r] += 1.0;
      layer.wo[r * d + r] += kAttentionGain;
    }
    layer.w1 = rng.fill(hidden_ * d, inv_sqrt_d);
    layer.w2 = rng.fill(d * hidden_, kMlpGain / std::sqrt(static_cast<double>(hidden_)));
  }
}

EmbeddingMatrix ToyEncoder::encode(std::span<const TokenId> tokens) const {
  if (tokens.empty()) {
    throw Error(ErrorKind::kInvalidToken, "token sequence is empty");
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] >= cfg_.vocab_size) {
      throw Error(ErrorKind::kInvalidToken,
                  "token " + std::to_string(tokens[i]) + " at position " +
                      std::to_string(i) + " outside vocabulary of " +
                      std::to_string(cfg_.vocab_size));
    }
  }

  const std::size_t n = tokens.size();
  const std::size_t d = cfg_.dim;
  const std::size_t heads = cfg_.n_heads;
  const std::size_t head_dim = d / heads;
  const double pos_scale = kPositionNorm / std::sqrt(static_cast<double>(d) / 2.0);

  std::vector<double> h(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const double* emb = embedding_.data() + tokens[i] * d;
    for (std::size_t c = 0; c < d; ++c) {
      const double freq = std::pow(10000.0, -static_cast<double>(c - c % 2) / static_cast<double>(d));
      const double angle = static_cast<double>(i) * freq;
      const double pe = c % 2 == 0 ? std::sin(angle) : std::cos(angle);
      h[i * d + c] = emb[c] + pos_scale * pe;
    }
  }

  std::vector<double> q(n * d), k(n * d), v(n * d), mixed(d), delta(d), act(hidden_);
  std::vector<double> weights(n);
  const double logit_scale = 1.0 / (std::sqrt(static_cast<double>(head_dim)) * cfg_.temperature);

  for (const Layer& layer : layers_) {
    for (std::size_t i = 0; i < n; ++i) {
      std::span<const double> hi(h.data() + i * d, d);
      matvec(layer.wq, hi, {q.data() + i * d, d});
      matvec(layer.wk, hi, {k.data() + i * d, d});
      matvec(layer.wv, hi, {v.data() + i * d, d});
    }

    std::vector<double> next = h;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t hd = 0; hd < heads; ++hd) {
        const std::size_t off = hd * head_dim;
        double peak = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j <= i; ++j) {
          double s = 0.0;
          for (std::size_t c = 0; c < head_dim; ++c) {
            s += q[i * d + off + c] * k[j * d + off + c];
          }
          weights[j] = s * logit_scale;
          peak = std::max(peak, weights[j]);
        }
        double total = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
          weights[j] = std::exp(weights[j] - peak);
          total += weights[j];
        }
        for (std::size_t c = 0; c < head_dim; ++c) {
          double acc = 0.0;
          for (std::size_t j = 0; j <= i; ++j) acc += weights[j] * v[j * d + off + c];
          mixed[off + c] = acc / total;
        }
      }
      matvec(layer.wo, mixed, delta);
      for (std::size_t c = 0; c < d; ++c) next[i * d + c] += delta[c];

      std::span<const double> attended(next.data() + i * d, d);
      matvec(layer.w1, attended, act);
      for (double& a : act) a = std::tanh(a);
      matvec(layer.w2, act, delta);
      for (std::size_t c = 0; c < d; ++c) next[i * d + c] += delta[c];
    }
    h = std::move(next);
  }

  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> row(h.data() + i * d, d);
    const double len = norm(row);
    if (len > 0.0) {
      for (double& x : row) x /= len;
    }
  }
  return EmbeddingMatrix(n, d, std::move(h));
}

EmbeddingMatrix ToyEncoder::encode_prompt(const PromptLayout& layout,
                                          std::span<const TokenId> tokens) const {
  if (tokens.size() != layout.total_tokens()) {
    throw Error(ErrorKind::kShapeMismatch,
                std::to_string(tokens.size()) + " tokens for a layout of " +
                    std::to_string(layout.total_tokens()));
  }
  return encode(tokens);
}

std::vector<TokenId> gather_tokens(std::span<const TokenId> tokens,
                                   std::span<const TokenSpan> spans) {
  std::vector<TokenId> out;
  for (const auto& s : spans) {
    if (s.end > tokens.size() || s.start > s.end) {
      throw Error(ErrorKind::kShapeMismatch, "span outside token sequence");
    }
    out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(s.start),
               tokens.begin() + static_cast<std::ptrdiff_t>(s.end));
  }
  return out;
}

ConceptMatrices encode_concepts(const ToyEncoder& encoder, const PromptLayout& layout,
                                std::span<const TokenId> tokens, std::size_t j) {
  if (tokens.size() != layout.total_tokens()) {
    throw Error(ErrorKind::kShapeMismatch,
                std::to_string(tokens.size()) + " tokens for a layout of " +
                    std::to_string(layout.total_tokens()));
  }
  const FramePartition p = partition(layout, j);
  const std::vector<TokenId> express_ids = gather_tokens(tokens, p.express_spans);
  ConceptMatrices out{encoder.encode(express_ids), std::nullopt};

  if (p.suppress_spans.empty()) return out;
  std::vector<double> stacked;
  std::size_t rows = 0;
  for (const TokenSpan& span : p.suppress_spans) {
    const TokenSpan one[] = {span};
    const EmbeddingMatrix part = encoder.encode(gather_tokens(tokens, one));
    stacked.insert(stacked.end(), part.data().begin(), part.data().end());
    rows += part.rows();
  }
  out.suppress = EmbeddingMatrix(rows, encoder.config().dim, std::move(stacked));
  return out;
}

}  // namespace orthoprompt
