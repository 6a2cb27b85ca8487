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

#ifndef ORTHOPROMPT_CLI_FIXTURES_HPP_
#define ORTHOPROMPT_CLI_FIXTURES_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orthoprompt/encoder.hpp"
#include "orthoprompt/prompt.hpp"

namespace orthoprompt::cli {

/// Built-in story prompts over a tiny word vocabulary, for demos and golden
/// tests. Words map to ids by their position in vocabulary().
struct StoryFixture {
  std::string name;
  std::vector<std::string> labels;
  std::vector<std::string> texts;  // whitespace-separated words per segment

  std::vector<TokenId> tokens() const;
  std::vector<std::size_t> lengths() const;
  PromptLayout layout() const;
};

std::span<const std::string_view> vocabulary();
std::span<const StoryFixture> fixtures();
std::optional<StoryFixture> find_fixture(std::string_view name);

/// Throws kInvalidToken for words outside the vocabulary.
std::vector<TokenId> tokenize(std::string_view text);

}  // namespace orthoprompt::cli

#endif  // ORTHOPROMPT_CLI_FIXTURES_HPP_
