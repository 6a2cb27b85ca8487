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

#include "orthoprompt/cli/fixtures.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "orthoprompt/error.hpp"

namespace orthoprompt::cli {
namespace {

// 64 entries, matching the default encoder vocabulary size.
constexpr std::array<std::string_view, 64> kVocabulary = {
    "a",        "an",      "the",     "of",      "in",      "with",    "on",
    "by",       "and",     "watercolor", "illustration", "portrait", "photo",
    "fluffy",   "corgi",   "dog",     "old",     "knight",  "silver",  "armor",
    "young",    "girl",    "red",     "hair",    "dressed", "yellow",  "raincoat",
    "walking",  "city",    "alley",   "playing", "ball",    "riding",  "horse",
    "standing", "snow",    "reading", "book",    "candlelight", "forest", "river",
    "sailing",  "boat",    "baby",    "gorilla", "eating",  "banana",  "sunny",
    "beach",    "night",   "market",  "wearing", "hat",     "garden",  "flowers",
    "mountain", "castle",  "rain",    "under",   "bridge",  "painting", "sky",
    "stars",    "cafe",
};

const std::vector<StoryFixture>& all_fixtures() {
  static const std::vector<StoryFixture> kFixtures = {
      {"dog-story",
       {"identity", "raincoat", "alley", "ball"},
       {"a watercolor illustration of a fluffy corgi dog",
        "dressed in a yellow raincoat",
        "walking in a city alley",
        "playing with a red ball"}},
      {"knight-story",
       {"identity", "horse", "snow", "book", "river"},
       {"a portrait of an old knight with silver armor",
        "riding a horse",
        "standing in the snow",
        "reading a book by candlelight",
        "sailing a boat on the river"}},
      {"girl-story",
       {"identity", "gorilla", "beach"},
       {"a photo of a young girl with red hair",
        "with a baby gorilla eating a banana",
        "on a sunny beach"}},
  };
  return kFixtures;
}

}  // namespace

std::span<const std::string_view> vocabulary() { return kVocabulary; }

std::span<const StoryFixture> fixtures() { return all_fixtures(); }

std::optional<StoryFixture> find_fixture(std::string_view name) {
  for (const auto& f : all_fixtures()) {
    if (f.name == name) return f;
  }
  return std::nullopt;
}

std::vector<TokenId> tokenize(std::string_view text) {
  std::vector<TokenId> ids;
  std::istringstream in{std::string(text)};
  for (std::string word; in >> word;) {
    const auto it = std::find(kVocabulary.begin(), kVocabulary.end(), word);
    if (it == kVocabulary.end()) {
      throw Error(ErrorKind::kInvalidToken, "word '" + word + "' is not in the fixture vocabulary");
    }
    ids.push_back(static_cast<TokenId>(it - kVocabulary.begin()));
  }
  return ids;
}

std::vector<TokenId> StoryFixture::tokens() const {
  std::vector<TokenId> out;
  for (const auto& t : texts) {
    const auto ids = tokenize(t);
    out.insert(out.end(), ids.begin(), ids.end());
  }
  return out;
}

std::vector<std::size_t> StoryFixture::lengths() const {
  std::vector<std::size_t> out;
  for (const auto& t : texts) out.push_back(tokenize(t).size());
  return out;
}

PromptLayout StoryFixture::layout() const { return build_layout(lengths(), labels); }

}  // namespace orthoprompt::cli
