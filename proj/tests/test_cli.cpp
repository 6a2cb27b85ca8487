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
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "oracles.hpp"
#include "orthoprompt/cli/commands.hpp"
#include "orthoprompt/cli/emb_file.hpp"
#include "orthoprompt/cli/fixtures.hpp"
#include "orthoprompt/cli/partition_spec.hpp"
#include "orthoprompt/cli/reports.hpp"
#include "orthoprompt/error.hpp"
#include "orthoprompt/metrics.hpp"

namespace orthoprompt::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kGolden = ORTHOPROMPT_GOLDEN_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("orthoprompt_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write_file(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  fs::path dir_;
};

std::string golden(const std::string& name) { return (kGolden / name).string(); }

TEST(EmbFile, BinaryRoundTripIsBitExact) {
  std::mt19937_64 rng(81);
  for (int t = 0; t < 20; ++t) {
    auto m = testing::gaussian(rng, 1 + rng() % 10, 1 + rng() % 10);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = static_cast<float>(m(r, c));
    }
    const auto bytes = encode_binary(m);
    EXPECT_EQ(bytes.size(), 12 + 4 * m.rows() * m.cols());
    const auto back = decode(bytes);
    EXPECT_EQ(back, m);
    EXPECT_EQ(encode_binary(back), bytes);
    const std::string text = encode_text(m);
    const std::vector<std::uint8_t> tb(text.begin(), text.end());
    EXPECT_EQ(decode(tb), m);
  }
}

TEST(EmbFile, LayoutIsLittleEndianRowMajor) {
  const auto bytes = encode_binary(EmbeddingMatrix::from_rows({{1, 0}}));
  const std::vector<std::uint8_t> want{'E', 'M', 'B', '1', 1, 0, 0, 0, 2, 0, 0, 0,
                                       0,   0,   0x80, 0x3f, 0, 0, 0, 0};
  EXPECT_EQ(bytes, want);
  EXPECT_EQ(read_bytes(golden("hand_refined.emb")), want);
}

TEST(EmbFile, AutoDetectsTextWithLeadingWhitespace) {
  const std::string text = "  \n{\"rows\": 1, \"cols\": 2, \"data\": [0.5, -2]}";
  const std::vector<std::uint8_t> bytes(text.begin(), text.end());
  EXPECT_EQ(decode(bytes), EmbeddingMatrix::from_rows({{0.5, -2}}));
}

TEST(EmbFile, MalformedInputsAreFormatErrors) {
  auto kind = [](std::vector<std::uint8_t> b) {
    try {
      (void)decode(b);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kNumericalFailure;
  };
  std::vector<std::uint8_t> good = encode_binary(EmbeddingMatrix::from_rows({{1, 2}}));
  auto truncated = good;
  truncated.pop_back();
  EXPECT_EQ(kind(truncated), ErrorKind::kFormatError);
  auto extra = good;
  extra.push_back(0);
  EXPECT_EQ(kind(extra), ErrorKind::kFormatError);
  auto magic = good;
  magic[3] = '2';
  EXPECT_EQ(kind(magic), ErrorKind::kFormatError);
  EXPECT_EQ(kind({}), ErrorKind::kFormatError);
  std::vector<std::uint8_t> huge{'E', 'M', 'B', '1', 0xff, 0xff, 0xff, 0xff,
                                 0xff, 0xff, 0xff, 0xff, 0, 0, 0, 0};
  EXPECT_EQ(kind(huge), ErrorKind::kFormatError);
  auto nan = good;
  nan[12] = 0;
  nan[13] = 0;
  nan[14] = 0xc0;
  nan[15] = 0x7f;
  EXPECT_EQ(kind(nan), ErrorKind::kInvalidMatrix);
  const std::string bad_text = "{\"rows\": 2, \"cols\": 2, \"data\": [1, 2, 3]}";
  EXPECT_EQ(kind({bad_text.begin(), bad_text.end()}), ErrorKind::kFormatError);
  EXPECT_THROW(encode_binary(EmbeddingMatrix::from_rows({{1e300}})), Error);
}

TEST(PartitionSpecDoc, ParsesAndValidates) {
  const auto spec = parse_partition_spec(
      R"({"segments":[{"label":"a","tokens":2},{"label":"b","tokens":3}],"frame":1,"mode":"slice"})");
  EXPECT_EQ(spec.tokens, (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(spec.mode, ConceptSource::kSlice);
  EXPECT_EQ(parse_partition_spec(to_json(spec)).labels, spec.labels);
  auto kind = [](const char* text) {
    try {
      (void)parse_partition_spec(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kNumericalFailure;
  };
  EXPECT_EQ(kind(R"({"segments":[{"label":"a","tokens":2},{"label":"a","tokens":3}],"frame":1})"),
            ErrorKind::kDuplicateLabel);
  EXPECT_EQ(kind(R"({"segments":[{"label":"a","tokens":2},{"label":"b","tokens":0}],"frame":1})"),
            ErrorKind::kEmptySegment);
  EXPECT_EQ(kind(R"({"segments":[{"label":"a","tokens":2},{"label":"b","tokens":1}],"frame":2})"),
            ErrorKind::kInvalidFrame);
  EXPECT_EQ(kind(R"({"segments":[{"label":"a","tokens":2}],"frame":1})"), ErrorKind::kMissingFrames);
  EXPECT_EQ(kind(R"({"segments":[{"label":"a","tokens":2},{"label":"b","tokens":1}]})"),
            ErrorKind::kFormatError);
  EXPECT_EQ(kind("not json"), ErrorKind::kFormatError);
  EXPECT_EQ(kind(R"({"segments":[{"label":"a","tokens":-1},{"label":"b","tokens":1}],"frame":1})"),
            ErrorKind::kFormatError);
}

TEST(AlphaGrid, RangesAndLists) {
  const auto grid = parse_alpha_grid("0:1:0.1");
  ASSERT_EQ(grid.size(), 11u);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 1.0);
  EXPECT_EQ(grid[3], 0.3);
  EXPECT_EQ(parse_alpha_grid("0.5,1"), (std::vector<double>{0.5, 1.0}));
  EXPECT_THROW(parse_alpha_grid("0:1"), Error);
  EXPECT_THROW(parse_alpha_grid("0:1:0"), Error);
  EXPECT_THROW(parse_alpha_grid("a,b"), Error);
  EXPECT_THROW(parse_alpha_grid(""), Error);
}

TEST(ExitCodes, Taxonomy) {
  EXPECT_EQ(exit_code_for(ErrorKind::kInvalidConfig), kExitUsage);
  EXPECT_EQ(exit_code_for(ErrorKind::kMissingSpans), kExitUsage);
  EXPECT_EQ(exit_code_for(ErrorKind::kFormatError), kExitFormat);
  EXPECT_EQ(exit_code_for(ErrorKind::kShapeMismatch), kExitFormat);
  EXPECT_EQ(exit_code_for(ErrorKind::kInvalidMatrix), kExitFormat);
  EXPECT_EQ(exit_code_for(ErrorKind::kNumericalFailure), kExitNumerical);
  EXPECT_EQ(exit_code_for(ErrorKind::kDegenerateInput), kExitNumerical);
}

TEST_F(CliTest, RefineHandExampleIsBitExact) {
  const auto r = cli({"refine", "--input", golden("hand_x.emb"), "--express",
                      golden("hand_express.emb"), "--suppress", golden("hand_suppress.emb"),
                      "--alpha", "1", "--mode", "dual", "--output", path("out.emb")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_bytes(path("out.emb")), read_bytes(golden("hand_refined.emb")));
}

TEST_F(CliTest, RefineAlphaZeroCopiesPayload) {
  std::mt19937_64 rng(82);
  auto x = testing::gaussian(rng, 6, 5);
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = 0; c < 5; ++c) x(r, c) = static_cast<float>(x(r, c));
  }
  x(0, 0) = -0.0;
  write_embedding(path("x.emb"), x);
  write_embedding(path("e.emb"), testing::gaussian(rng, 2, 5));
  write_embedding(path("s.emb"), testing::gaussian(rng, 2, 5));
  for (const char* mode : {"dual", "single"}) {
    const auto r = cli({"refine", "--input", path("x.emb"), "--express", path("e.emb"),
                        "--suppress", path("s.emb"), "--alpha", "0", "--mode", mode,
                        "--output", path("out.emb")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read_bytes(path("out.emb")), read_bytes(path("x.emb"))) << mode;
  }
}

TEST_F(CliTest, RefineWritesFlatJsonReport) {
  const auto r = cli({"refine", "--input", golden("hand_x.emb"), "--express",
                      golden("hand_express.emb"), "--suppress", golden("hand_suppress.emb"),
                      "--output", path("out.json"), "--report", path("report.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_embedding(path("out.json")), EmbeddingMatrix::from_rows({{1, 0}}));
  std::ifstream in(path("report.json"));
  const auto j = nlohmann::json::parse(in);
  for (const char* key : {"mode", "alpha", "suppress_energy_before", "suppress_energy_after",
                          "express_energy_before", "express_energy_after",
                          "express_preserved", "orthogonality_max_residual"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["mode"], "dual");
  EXPECT_EQ(j["express_preserved"], true);
  EXPECT_NEAR(j["suppress_energy_before"].get<double>(), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(j["suppress_energy_after"].get<double>(), std::sqrt(0.5), 1e-12);
}

TEST_F(CliTest, UsageErrors) {
  const std::string x = golden("hand_x.emb"), e = golden("hand_express.emb");
  EXPECT_EQ(cli({"refine", "--input", x, "--express", e, "--output", path("o.emb")}).code,
            kExitUsage);
  EXPECT_EQ(cli({"refine", "--input", x, "--suppress", e, "--output", path("o.emb")}).code,
            kExitUsage);
  EXPECT_EQ(cli({"refine", "--input", x, "--output", path("o.emb")}).code, kExitUsage);
  EXPECT_EQ(cli({"refine", "--input", x, "--express", e, "--suppress", e, "--alpha", "2",
                 "--output", path("o.emb")})
                .code,
            kExitUsage);
  EXPECT_EQ(cli({"refine", "--input", x, "--express", e, "--suppress", e, "--mode",
                 "rescale-only", "--output", path("o.emb")})
                .code,
            kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"sweep", "--input", x, "--express", e, "--suppress", e, "--modes", ""}).code,
            kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, FormatAndShapeErrors) {
  write_file("junk.emb", "EMB1junk");
  const std::string e = golden("hand_express.emb");
  EXPECT_EQ(cli({"refine", "--input", path("junk.emb"), "--express", e, "--suppress", e,
                 "--output", path("o.emb")})
                .code,
            kExitFormat);
  EXPECT_EQ(cli({"refine", "--input", path("missing.emb"), "--express", e, "--suppress", e,
                 "--output", path("o.emb")})
                .code,
            kExitFormat);
  write_embedding(path("wide.emb"), EmbeddingMatrix::from_rows({{1, 2, 3}}));
  EXPECT_EQ(cli({"refine", "--input", path("wide.emb"), "--express", e, "--suppress", e,
                 "--output", path("o.emb")})
                .code,
            kExitFormat);
}

TEST_F(CliTest, AnalyzeIdenticalAndOrthogonalSegments) {
  write_embedding(path("same.emb"), EmbeddingMatrix::from_rows({{1, 2}, {1, 2}}));
  write_embedding(path("orth.emb"), EmbeddingMatrix::from_rows({{1, 0}, {0, 3}}));
  write_file("p.json", R"({"segments":[{"label":"a","tokens":1},{"label":"b","tokens":1}],"frame":1})");
  auto same = cli({"analyze", "--input", path("same.emb"), "--partition", path("p.json")});
  ASSERT_EQ(same.code, 0) << same.err;
  EXPECT_NEAR(nlohmann::json::parse(same.out)["pairwise"][0][1].get<double>(), 1.0, 1e-12);
  auto orth = cli({"analyze", "--input", path("orth.emb"), "--partition", path("p.json"),
                   "--output", path("r.json"), "--csv", path("r.csv")});
  ASSERT_EQ(orth.code, 0) << orth.err;
  std::ifstream in(path("r.json"));
  EXPECT_NEAR(nlohmann::json::parse(in)["pairwise"][1][0].get<double>(), 0.0, 1e-12);
  EXPECT_TRUE(fs::exists(path("r.csv")));
  write_embedding(path("zero.emb"), EmbeddingMatrix::from_rows({{0, 0}, {0, 3}}));
  EXPECT_EQ(cli({"analyze", "--input", path("zero.emb"), "--partition", path("p.json")}).code,
            kExitOk);
}

// Regenerate with:
//   orthoprompt simulate --tokens dog-story --partition <golden>/dog_story_partition.json
//       --emit full --out-prefix dog
//   orthoprompt analyze --input dog.full.emb --partition <golden>/dog_story_partition.json
TEST_F(CliTest, AnalyzeMatchesGoldenReport) {
  const std::string part = golden("dog_story_partition.json");
  ASSERT_EQ(cli({"simulate", "--tokens", "dog-story", "--partition", part, "--emit", "full",
                 "--out-prefix", path("dog")})
                .code,
            0);
  const auto r = cli({"analyze", "--input", path("dog.full.emb"), "--partition", part});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto got = nlohmann::json::parse(r.out);
  std::ifstream in(golden("dog_story_analyze.json"));
  const auto want = nlohmann::json::parse(in);
  EXPECT_EQ(got["labels"], want["labels"]);
  EXPECT_EQ(got["pooling"], want["pooling"]);
  const auto& gp = got["pairwise"];
  const auto& wp = want["pairwise"];
  ASSERT_EQ(gp.size(), wp.size());
  for (std::size_t i = 0; i < gp.size(); ++i) {
    for (std::size_t j = 0; j < gp.size(); ++j) {
      EXPECT_NEAR(gp[i][j].get<double>(), wp[i][j].get<double>(), 1e-6);
    }
    EXPECT_NEAR(got["per_segment_norms"][i].get<double>(),
                want["per_segment_norms"][i].get<double>(), 1e-6);
  }
}

TEST(Fixtures, DogStoryFramesAreMoreSimilarInContext) {
  const auto story = *find_fixture("dog-story");
  const auto layout = story.layout();
  const auto ids = story.tokens();
  const ToyEncoder enc;
  const auto x = enc.encode_prompt(layout, ids);
  const auto report = entanglement_report(x, layout);
  for (std::size_t a = 1; a < layout.segments().size(); ++a) {
    for (std::size_t b = a + 1; b < layout.segments().size(); ++b) {
      const std::vector<TokenSpan> sa{layout.segments()[a].span}, sb{layout.segments()[b].span};
      const double alone = pooled_cosine(enc.encode(gather_tokens(ids, sa)),
                                         enc.encode(gather_tokens(ids, sb)));
      EXPECT_GT(*report.pairwise[a][b], alone) << a << "," << b;
    }
  }
}

TEST(Fixtures, TokenizeRejectsUnknownWords) {
  EXPECT_EQ(tokenize("a fluffy dog").size(), 3u);
  EXPECT_THROW(tokenize("a purple dog"), Error);
  EXPECT_EQ(vocabulary().size(), 64u);
  EXPECT_FALSE(find_fixture("cat-story").has_value());
}

TEST_F(CliTest, SimulateIsDeterministicAndEmitsConceptFiles) {
  const std::string part = golden("dog_story_partition.json");
  for (const char* prefix : {"a", "b"}) {
    const auto r = cli({"simulate", "--tokens", "dog-story", "--partition", part, "--emit", "all",
                        "--out-prefix", path(prefix)});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (const char* what : {"full", "express", "suppress"}) {
    const std::string name = std::string(".") + what + ".emb";
    EXPECT_EQ(read_bytes(path("a" + name)), read_bytes(path("b" + name))) << what;
  }
  EXPECT_EQ(read_embedding(path("a.full.emb")).rows(), 23u);
  EXPECT_EQ(read_embedding(path("a.express.emb")).rows(), 13u);
  EXPECT_EQ(read_embedding(path("a.suppress.emb")).rows(), 10u);
}

TEST_F(CliTest, SimulatePrefixInvariance) {
  write_file("p.json",
             R"({"segments":[{"label":"id","tokens":3},{"label":"f1","tokens":2},)"
             R"({"label":"f2","tokens":2}],"frame":1})");
  ASSERT_EQ(cli({"simulate", "--tokens", "1,2,3,4,5,6,7", "--partition", path("p.json"),
                 "--emit", "full", "--out-prefix", path("a")})
                .code,
            0);
  ASSERT_EQ(cli({"simulate", "--tokens", "1,2,3,4,5,40,41", "--partition", path("p.json"),
                 "--emit", "full", "--out-prefix", path("b")})
                .code,
            0);
  const auto a = read_embedding(path("a.full.emb"));
  const auto b = read_embedding(path("b.full.emb"));
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) ASSERT_EQ(a(r, c), b(r, c));
  }
  EXPECT_NE(a(6, 0), b(6, 0));
}

TEST_F(CliTest, SimulateErrors) {
  EXPECT_EQ(cli({"simulate", "--tokens", "1,2,99", "--out-prefix", path("x"), "--emit", "full"})
                .code,
            kExitFormat);
  EXPECT_EQ(cli({"simulate", "--tokens", "1,2,3", "--out-prefix", path("x")}).code, kExitUsage);
  EXPECT_EQ(cli({"simulate", "--tokens", "nonsense", "--out-prefix", path("x")}).code,
            kExitUsage);
  EXPECT_EQ(cli({"simulate", "--tokens", "1,2", "--dim", "7", "--heads", "2", "--emit", "full",
                 "--out-prefix", path("x")})
                .code,
            kExitUsage);
}

TEST_F(CliTest, SweepOrderingAndMonotoneSuppressEnergy) {
  const std::string part = golden("dog_story_partition.json");
  ASSERT_EQ(cli({"simulate", "--tokens", "dog-story", "--partition", part, "--emit", "all",
                 "--out-prefix", path("d")})
                .code,
            0);
  const auto r = cli({"sweep", "--input", path("d.full.emb"), "--express",
                      path("d.express.emb"), "--suppress", path("d.suppress.emb"),
                      "--partition", part, "--alphas", "0:1:0.1", "--modes",
                      "none,dual,single,dual-rescale,rescale-only"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, mode_csv_header());
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(lines, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  ASSERT_EQ(rows.size(), 55u);
  const std::vector<std::string> modes{"none", "dual", "single", "dual_rescale", "rescale_only"};
  double prev_dual = 1e300;
  const double baseline_sup = std::stod(rows[0][4]);
  const double baseline_exp = std::stod(rows[0][6]);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][0], modes[i % 5]);
    EXPECT_NEAR(std::stod(rows[i][1]), static_cast<double>(i / 5) / 10.0, 1e-12);
    if (i < 5 && modes[i] != "rescale_only") {
      EXPECT_EQ(std::stod(rows[i][5]), baseline_sup) << modes[i];
      EXPECT_EQ(std::stod(rows[i][7]), baseline_exp) << modes[i];
    }
    if (modes[i % 5] == "dual") {
      const double now = std::stod(rows[i][5]);
      EXPECT_LE(now, prev_dual + 1e-12);
      prev_dual = now;
    }
  }
}

TEST_F(CliTest, SliceModePartitionRefinesWithoutConceptFiles) {
  const std::string part = golden("dog_story_partition.json");
  ASSERT_EQ(cli({"simulate", "--tokens", "dog-story", "--partition", part, "--emit", "full",
                 "--out-prefix", path("d")})
                .code,
            0);
  auto spec = read_partition_spec(part);
  spec.mode = ConceptSource::kSlice;
  write_file("slice.json", to_json(spec));
  const auto r = cli({"refine", "--input", path("d.full.emb"), "--partition", path("slice.json"),
                      "--mode", "dual-rescale", "--output", path("o.emb"), "--report",
                      path("o.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_embedding(path("o.emb")).rows(), 23u);
  EXPECT_TRUE(fs::exists(path("o.csv")));
}

}  // namespace
}  // namespace orthoprompt::cli
