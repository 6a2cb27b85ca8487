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

// EMB1 embedding files.
//
// Binary layout, all little-endian:
//
//   offset 0   "EMB1"           4 bytes magic
//   offset 4   rows             uint32
//   offset 8   cols             uint32
//   offset 12  rows*cols values IEEE-754 binary32, row-major
//
// The text form is a JSON object {"rows": R, "cols": C, "data": [...]}. Readers
// pick the form from the first byte: 'E' is binary, '{' (after optional
// whitespace) is text. Values are stored as 32-bit floats in both forms; the
// text writer prints each float exactly so either form round-trips bit for bit.

#ifndef ORTHOPROMPT_CLI_EMB_FILE_HPP_
#define ORTHOPROMPT_CLI_EMB_FILE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "orthoprompt/matrix.hpp"

namespace orthoprompt::cli {

enum class EmbFormat { kBinary, kText };

inline constexpr char kEmbMagic[4] = {'E', 'M', 'B', '1'};

std::vector<std::uint8_t> encode_binary(const EmbeddingMatrix& m);
std::string encode_text(const EmbeddingMatrix& m);

/// Auto-detects the form. Throws kFormatError on malformed input and
/// kInvalidMatrix on non-finite values.
EmbeddingMatrix decode(std::span<const std::uint8_t> bytes);

EmbeddingMatrix read_embedding(const std::filesystem::path& path);
void write_embedding(const std::filesystem::path& path, const EmbeddingMatrix& m,
                     EmbFormat format = EmbFormat::kBinary);

/// ".json" selects the text form, anything else binary.
EmbFormat format_for(const std::filesystem::path& path);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

}  // namespace orthoprompt::cli

#endif  // ORTHOPROMPT_CLI_EMB_FILE_HPP_
