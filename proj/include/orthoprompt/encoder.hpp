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

#ifndef ORTHOPROMPT_ENCODER_HPP_
#define ORTHOPROMPT_ENCODER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "orthoprompt/matrix.hpp"
#include "orthoprompt/prompt.hpp"

namespace orthoprompt {

using TokenId = std::uint32_t;

inline constexpr std::uint64_t kDefaultEncoderSeed = 20250611;

struct EncoderConfig {
  std::size_t vocab_size = 64;
  std::size_t dim = 256;
  std::size_t n_layers = 2;
  std::size_t n_heads = 2;
  std::uint64_t seed = kDefaultEncoderSeed;
  double temperature = 1.0;  // attention logits are divided by this
};

/// Small causal transformer with fixed random weights.
///
/// Token lookup plus sinusoidal positions, then n_layers blocks of causal
/// multi-head softmax attention and a tanh MLP, each with a residual add.
/// Output rows are scaled to unit norm. Query and key maps are random; value
/// and output maps stay close to the identity, so a row absorbs a damped copy
/// of the token vectors before it. Every row is computed from its own
/// prefix only, in a fixed summation order, so row i is bit-identical for any
/// two sequences sharing their first i + 1 tokens.
class ToyEncoder {
 public:
  /// Throws kInvalidConfig for zero sizes, dim not divisible by n_heads or a
  /// non-positive temperature.
  explicit ToyEncoder(const EncoderConfig& cfg = {});

  const EncoderConfig& config() const noexcept { return cfg_; }

  /// Throws kInvalidToken for an empty sequence or an id >= vocab_size.
  EmbeddingMatrix encode(std::span<const TokenId> tokens) const;

  /// encode() with a check that the sequence matches the layout length
  /// (kShapeMismatch otherwise).
  EmbeddingMatrix encode_prompt(const PromptLayout& layout,
                                std::span<const TokenId> tokens) const;

 private:
  struct Layer {
    std::vector<double> wq, wk, wv, wo;  // dim x dim, row-major
    std::vector<double> w1;              // hidden x dim
    std::vector<double> w2;              // dim x hidden
  };

  EncoderConfig cfg_;
  std::size_t hidden_;
  std::vector<double> embedding_;  // vocab x dim
  std::vector<Layer> layers_;
};

/// Concept matrices obtained by re-encoding sub-prompts.
struct ConceptMatrices {
  EmbeddingMatrix express;                  // encode([P0; Pj])
  std::optional<EmbeddingMatrix> suppress;  // each other frame encoded alone, stacked
};

ConceptMatrices encode_concepts(const ToyEncoder& encoder, const PromptLayout& layout,
                                std::span<const TokenId> tokens, std::size_t j);

/// Tokens of the given spans, concatenated in order.
std::vector<TokenId> gather_tokens(std::span<const TokenId> tokens,
                                   std::span<const TokenSpan> spans);

}  // namespace orthoprompt

#endif  // ORTHOPROMPT_ENCODER_HPP_
