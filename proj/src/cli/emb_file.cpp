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

#include "orthoprompt/cli/emb_file.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "orthoprompt/error.hpp"

namespace orthoprompt::cli {
namespace {

constexpr std::size_t kHeaderBytes = 12;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

std::uint32_t checked_dim(std::size_t n, const char* what) {
  if (n > UINT32_MAX) {
    throw Error(ErrorKind::kFormatError, std::string(what) + " does not fit in 32 bits");
  }
  return static_cast<std::uint32_t>(n);
}

float to_float(double v) {
  const float f = static_cast<float>(v);
  if (!std::isfinite(f)) {
    throw Error(ErrorKind::kInvalidMatrix,
                "value " + std::to_string(v) + " is not representable as float32");
  }
  return f;
}

EmbeddingMatrix decode_binary(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kEmbMagic, 4) != 0) {
    throw Error(ErrorKind::kFormatError, "missing EMB1 header");
  }
  const std::uint64_t rows = get_u32(bytes, 4);
  const std::uint64_t cols = get_u32(bytes, 8);
  const std::uint64_t payload = bytes.size() - kHeaderBytes;
  const std::uint64_t expected = kHeaderBytes + rows * cols * 4;
  if (rows * cols > payload / 4 || bytes.size() != expected) {
    throw Error(ErrorKind::kFormatError,
                "header declares " + std::to_string(rows) + "x" + std::to_string(cols) +
                    " (" + std::to_string(expected) + " bytes) but file has " +
                    std::to_string(bytes.size()));
  }
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::kFormatError, "embedding must have at least one row and column");
  }
  std::vector<double> data(rows * cols);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<float>(get_u32(bytes, kHeaderBytes + 4 * i));
  }
  return EmbeddingMatrix(rows, cols, std::move(data));
}

EmbeddingMatrix decode_text(std::span<const std::uint8_t> bytes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormatError, std::string("malformed embedding JSON: ") + e.what());
  }
  try {
    const auto rows = doc.at("rows").get<std::size_t>();
    const auto cols = doc.at("cols").get<std::size_t>();
    const auto& values = doc.at("data");
    if (!values.is_array() || values.size() != rows * cols) {
      throw Error(ErrorKind::kFormatError,
                  "data holds " + std::to_string(values.size()) + " values, expected " +
                      std::to_string(rows * cols));
    }
    if (rows == 0 || cols == 0) {
      throw Error(ErrorKind::kFormatError, "embedding must have at least one row and column");
    }
    std::vector<double> data;
    data.reserve(values.size());
    for (const auto& v : values) {
      if (!v.is_number()) throw Error(ErrorKind::kFormatError, "data entries must be numbers");
      // Values are float32 on disk in both forms.
      data.push_back(static_cast<float>(v.get<double>()));
    }
    return EmbeddingMatrix(rows, cols, std::move(data));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormatError, std::string("embedding JSON: ") + e.what());
  }
}

}  // namespace

std::vector<std::uint8_t> encode_binary(const EmbeddingMatrix& m) {
  std::vector<std::uint8_t> out(kEmbMagic, kEmbMagic + 4);
  out.reserve(kHeaderBytes + m.data().size() * 4);
  put_u32(out, checked_dim(m.rows(), "row count"));
  put_u32(out, checked_dim(m.cols(), "column count"));
  for (double v : m.data()) put_u32(out, std::bit_cast<std::uint32_t>(to_float(v)));
  return out;
}

std::string encode_text(const EmbeddingMatrix& m) {
  nlohmann::json doc;
  doc["rows"] = m.rows();
  doc["cols"] = m.cols();
  auto data = nlohmann::json::array();
  // float -> double is exact and the JSON writer prints the shortest string
  // that parses back to the same double.
  for (double v : m.data()) data.push_back(static_cast<double>(to_float(v)));
  doc["data"] = std::move(data);
  return doc.dump() + "\n";
}

EmbeddingMatrix decode(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw Error(ErrorKind::kFormatError, "empty embedding file");
  if (bytes[0] == static_cast<std::uint8_t>('E')) return decode_binary(bytes);
  std::size_t i = 0;
  while (i < bytes.size() && std::isspace(bytes[i])) ++i;
  if (i < bytes.size() && bytes[i] == static_cast<std::uint8_t>('{')) {
    return decode_text(bytes);
  }
  throw Error(ErrorKind::kFormatError, "neither EMB1 binary nor JSON text");
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kFormatError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

EmbeddingMatrix read_embedding(const std::filesystem::path& path) {
  try {
    return decode(read_bytes(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
}

void write_embedding(const std::filesystem::path& path, const EmbeddingMatrix& m,
                     EmbFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kFormatError, "cannot write " + path.string());
  if (format == EmbFormat::kText) {
    out << encode_text(m);
  } else {
    const auto bytes = encode_binary(m);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  if (!out) throw Error(ErrorKind::kFormatError, "short write to " + path.string());
}

EmbFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".json" ? EmbFormat::kText : EmbFormat::kBinary;
}

}  // namespace orthoprompt::cli
