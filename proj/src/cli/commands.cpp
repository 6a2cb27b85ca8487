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

#include "orthoprompt/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "orthoprompt/cli/emb_file.hpp"
#include "orthoprompt/cli/fixtures.hpp"
#include "orthoprompt/cli/partition_spec.hpp"
#include "orthoprompt/cli/reports.hpp"
#include "orthoprompt/encoder.hpp"
#include "orthoprompt/metrics.hpp"
#include "orthoprompt/refinement.hpp"

namespace orthoprompt::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RefineArgs {
  std::string input;
  std::string express;
  std::string suppress;
  std::string partition;
  std::string output;
  std::string report;
  double alpha = 1.0;
  std::string mode = "dual";
  std::string granularity = "per-token";
  double beta = 0.5;
  double tol = kDefaultRankTol;
  double epsilon = kDefaultEpsilon;
};

struct AnalyzeArgs {
  std::string input;
  std::string partition;
  std::string pooling = "mean";
  std::string output;
  std::string csv;
};

struct SimulateArgs {
  std::uint64_t seed = kDefaultEncoderSeed;
  std::size_t dim = EncoderConfig{}.dim;
  std::size_t layers = EncoderConfig{}.n_layers;
  std::size_t heads = EncoderConfig{}.n_heads;
  std::size_t vocab = EncoderConfig{}.vocab_size;
  double temperature = EncoderConfig{}.temperature;
  std::string tokens;
  std::string partition;
  std::size_t frame = 0;
  std::string emit = "all";
  std::string out_prefix;
  std::string format = "bin";
};

struct SweepArgs {
  RefineArgs base;
  std::string alphas = "0:1:0.1";
  std::string modes;
};

void add_problem_options(CLI::App& cmd, RefineArgs& a) {
  cmd.add_option("--input", a.input, "Full prompt embedding X (EMB1)")->required();
  cmd.add_option("--express", a.express, "Express concept matrix (EMB1)");
  cmd.add_option("--suppress", a.suppress, "Suppress concept matrix (EMB1)");
  cmd.add_option("--partition", a.partition, "Partition spec (JSON)");
  cmd.add_option("--granularity", a.granularity, "per-token | flattened");
  cmd.add_option("--beta", a.beta, "Rescale factor for the rescale modes");
  cmd.add_option("--tol", a.tol, "Relative rank-truncation tolerance");
  cmd.add_option("--epsilon", a.epsilon, "Zero-norm guard for the rejection");
}

RefinementProblem load_problem(const RefineArgs& a) {
  if (!a.suppress.empty() && a.express.empty()) {
    throw UsageError("--suppress requires --express");
  }
  if (!a.express.empty() && a.suppress.empty()) {
    throw UsageError("--express requires --suppress");
  }
  if (a.express.empty() && a.partition.empty()) {
    throw UsageError("give either --express/--suppress or --partition");
  }

  EmbeddingMatrix x = read_embedding(a.input);
  std::optional<PartitionSpec> spec;
  if (!a.partition.empty()) spec = read_partition_spec(a.partition);
  if (spec && spec->layout().total_tokens() != x.rows()) {
    throw Error(ErrorKind::kShapeMismatch,
                a.partition + " covers " + std::to_string(spec->layout().total_tokens()) +
                    " tokens but " + a.input + " has " + std::to_string(x.rows()) + " rows");
  }

  if (!a.express.empty()) {
    std::optional<FramePartition> spans;
    if (spec) spans = spec->frame_partition();
    return RefinementProblem::from_concepts(std::move(x), read_embedding(a.express),
                                            read_embedding(a.suppress), a.tol,
                                            std::move(spans));
  }
  if (spec->mode == ConceptSource::kReencode) {
    throw UsageError(a.partition +
                     " asks for re-encoded concepts; pass --express/--suppress or set "
                     "\"mode\": \"slice\"");
  }
  return RefinementProblem::from_slices(std::move(x), spec->layout(), spec->frame, a.tol);
}

RefinementConfig make_config(const RefineArgs& a, std::string_view mode_text, double alpha) {
  RefinementConfig cfg;
  const auto mode = parse_mode(mode_text);
  if (!mode) throw UsageError("unknown --mode '" + std::string(mode_text) + "'");
  const auto gran = parse_granularity(a.granularity);
  if (!gran) throw UsageError("unknown --granularity '" + a.granularity + "'");
  cfg.alpha = alpha;
  cfg.mode = *mode;
  cfg.granularity = *gran;
  cfg.rescale_factor = a.beta;
  cfg.epsilon = a.epsilon;
  cfg.tol = a.tol;
  cfg.validate();
  return cfg;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error(ErrorKind::kFormatError, "cannot write " + path);
  f << text;
  if (!f) throw Error(ErrorKind::kFormatError, "short write to " + path);
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

int cmd_refine(const RefineArgs& a, std::ostream& out) {
  // Validate flags before touching any file.
  const RefinementConfig cfg = make_config(a, a.mode, a.alpha);
  const RefinementProblem problem = load_problem(a);
  const RefinementDecomposition d = problem.run(cfg);
  write_embedding(a.output, d.x_refined, format_for(a.output));

  if (!a.report.empty()) {
    const ModeReport row = evaluate(problem, cfg);
    if (ends_with(a.report, ".csv")) {
      write_text(a.report, mode_csv_header() + "\n" + mode_csv_row(row) + "\n", out);
    } else {
      write_text(a.report, to_json(row).dump(2) + "\n", out);
    }
  }
  return kExitOk;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const auto pooling = parse_pooling(a.pooling);
  if (!pooling) throw UsageError("unknown --pooling '" + a.pooling + "'");
  const EmbeddingMatrix x = read_embedding(a.input);
  const PartitionSpec spec = read_partition_spec(a.partition);
  const EntanglementReport report = entanglement_report(x, spec.layout(), *pooling);
  write_text(a.output, to_json(report).dump(2) + "\n", out);
  if (!a.csv.empty()) write_text(a.csv, to_csv(report), out);
  return kExitOk;
}

std::vector<TokenId> parse_id_list(const std::string& text) {
  std::vector<TokenId> ids;
  std::string cleaned = text;
  for (char& c : cleaned) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(cleaned);
  for (std::string word; in >> word;) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(word, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != word.size() || word.front() == '-') {
      throw UsageError("--tokens: '" + text + "' is neither a fixture name nor an id list");
    }
    ids.push_back(static_cast<TokenId>(v));
  }
  if (ids.empty()) throw UsageError("--tokens is empty");
  return ids;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.emit != "full" && a.emit != "express" && a.emit != "suppress" && a.emit != "all") {
    throw UsageError("--emit must be one of full, express, suppress, all");
  }
  if (a.format != "bin" && a.format != "text") {
    throw UsageError("--format must be bin or text");
  }

  std::optional<PartitionSpec> spec;
  if (!a.partition.empty()) spec = read_partition_spec(a.partition);

  std::vector<TokenId> ids;
  std::optional<PromptLayout> layout;
  if (const auto fixture = find_fixture(a.tokens)) {
    ids = fixture->tokens();
    layout = fixture->layout();
    if (spec && spec->tokens != fixture->lengths()) {
      throw Error(ErrorKind::kShapeMismatch,
                  a.partition + " segment lengths do not match fixture " + fixture->name);
    }
  } else {
    ids = parse_id_list(a.tokens);
    if (spec) layout = spec->layout();
  }
  if (!layout && a.emit != "full") {
    throw UsageError("--emit " + a.emit + " needs --partition or a fixture name for --tokens");
  }

  EncoderConfig ecfg;
  ecfg.seed = a.seed;
  ecfg.dim = a.dim;
  ecfg.n_layers = a.layers;
  ecfg.n_heads = a.heads;
  ecfg.vocab_size = a.vocab;
  ecfg.temperature = a.temperature;
  const ToyEncoder encoder(ecfg);

  const EmbeddingMatrix x = layout ? encoder.encode_prompt(*layout, ids) : encoder.encode(ids);
  const std::string ext = a.format == "text" ? ".json" : ".emb";
  const EmbFormat fmt = a.format == "text" ? EmbFormat::kText : EmbFormat::kBinary;
  auto emit = [&](const std::string& what, const EmbeddingMatrix& m) {
    const std::string path = a.out_prefix + "." + what + ext;
    write_embedding(path, m, fmt);
    out << what << ' ' << path << ' ' << m.rows() << 'x' << m.cols() << '\n';
  };

  if (a.emit == "full" || a.emit == "all") emit("full", x);
  if (a.emit == "full") return kExitOk;

  const std::size_t frame = a.frame != 0 ? a.frame : (spec ? spec->frame : 1);
  const ConceptSource source = spec ? spec->mode : ConceptSource::kReencode;
  const FramePartition p = partition(*layout, frame);

  EmbeddingMatrix express = slice(x, p.express_spans);
  std::optional<EmbeddingMatrix> suppress;
  if (source == ConceptSource::kReencode) {
    ConceptMatrices c = encode_concepts(encoder, *layout, ids, frame);
    express = std::move(c.express);
    suppress = std::move(c.suppress);
  } else if (!p.suppress_spans.empty()) {
    suppress = slice(x, p.suppress_spans);
  }

  if (a.emit == "express" || a.emit == "all") emit("express", express);
  if (a.emit == "suppress" || a.emit == "all") {
    if (suppress) {
      emit("suppress", *suppress);
    } else {
      err << "note: frame " << frame << " has no suppress frames; no suppress file written\n";
    }
  }
  return kExitOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  std::vector<std::string> modes;
  std::string cleaned = a.modes;
  for (char& c : cleaned) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(cleaned);
  for (std::string m; in >> m;) modes.push_back(m);
  if (modes.empty()) throw UsageError("--modes lists no modes");

  const std::vector<double> alphas = parse_alpha_grid(a.alphas);
  // Check every cell's flags before doing any work.
  for (const auto& m : modes) {
    if (m != "none") (void)make_config(a.base, m, alphas.front());
  }
  const RefinementProblem problem = load_problem(a.base);

  std::string table = mode_csv_header() + "\n";
  for (double alpha : alphas) {
    for (const auto& m : modes) {
      ModeReport row = m == "none" ? evaluate_baseline(problem)
                                   : evaluate(problem, make_config(a.base, m, alpha));
      if (m == "none") row.alpha = alpha;
      table += mode_csv_row(row) + "\n";
    }
  }
  write_text(a.base.output, table, out);
  return kExitOk;
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidConfig:
    case ErrorKind::kMissingSpans:
      return kExitUsage;
    case ErrorKind::kNumericalFailure:
    case ErrorKind::kDegenerateInput:
      return kExitNumerical;
    case ErrorKind::kInvalidMatrix:
    case ErrorKind::kShapeMismatch:
    case ErrorKind::kEmptySegment:
    case ErrorKind::kMissingFrames:
    case ErrorKind::kInvalidFrame:
    case ErrorKind::kDuplicateLabel:
    case ErrorKind::kInvalidToken:
    case ErrorKind::kFormatError:
      return kExitFormat;
  }
  return kExitFormat;
}

std::vector<double> parse_alpha_grid(std::string_view text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
      throw Error(ErrorKind::kInvalidConfig, "bad number '" + s + "' in alpha grid");
    }
    return v;
  };

  const std::string s(text);
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) {
      throw Error(ErrorKind::kInvalidConfig, "alpha range must be start:end:step");
    }
    const double start = number(parts[0]);
    const double end = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0.0) || end < start) {
      throw Error(ErrorKind::kInvalidConfig, "alpha range needs step > 0 and end >= start");
    }
    // Index-based so rounding never drops or duplicates the end point.
    const auto n = static_cast<long long>(std::floor((end - start) / step + 1e-9));
    for (long long k = 0; k <= n; ++k) {
      const double v = start + static_cast<double>(k) * step;
      out.push_back(std::round(v * 1e12) / 1e12);
    }
  } else {
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ',');) {
      if (!part.empty()) out.push_back(number(part));
    }
  }
  if (out.empty()) throw Error(ErrorKind::kInvalidConfig, "alpha grid is empty");
  return out;
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual-subspace refinement of concatenated prompt embeddings"};
  app.name("orthoprompt");
  app.require_subcommand(1);

  RefineArgs refine;
  auto* refine_cmd = app.add_subcommand("refine", "Refine X for one frame and write X'");
  add_problem_options(*refine_cmd, refine);
  refine_cmd->add_option("--alpha", refine.alpha, "Suppression strength in [0, 1]");
  refine_cmd->add_option("--mode", refine.mode, "dual | single | dual-rescale | rescale-only");
  refine_cmd->add_option("--output", refine.output, "Refined embedding path")->required();
  refine_cmd->add_option("--report", refine.report, "Report path (.json or .csv)");

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Pairwise pooled cosine between segments");
  analyze_cmd->add_option("--input", analyze.input, "Embedding (EMB1)")->required();
  analyze_cmd->add_option("--partition", analyze.partition, "Partition spec (JSON)")->required();
  analyze_cmd->add_option("--pooling", analyze.pooling, "mean | last-token");
  analyze_cmd->add_option("--output", analyze.output, "JSON report path (stdout if omitted)");
  analyze_cmd->add_option("--csv", analyze.csv, "Optional CSV report path");

  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Encode a prompt with the toy encoder");
  simulate_cmd->add_option("--seed", simulate.seed, "Encoder parameter seed");
  simulate_cmd->add_option("--dim", simulate.dim, "Embedding dimension");
  simulate_cmd->add_option("--layers", simulate.layers, "Transformer layers");
  simulate_cmd->add_option("--heads", simulate.heads, "Attention heads");
  simulate_cmd->add_option("--vocab", simulate.vocab, "Vocabulary size");
  simulate_cmd->add_option("--temperature", simulate.temperature, "Attention temperature");
  simulate_cmd->add_option("--tokens", simulate.tokens, "Fixture name or comma-separated ids")
      ->required();
  simulate_cmd->add_option("--partition", simulate.partition, "Partition spec (JSON)");
  simulate_cmd->add_option("--frame", simulate.frame, "Override the spec's active frame");
  simulate_cmd->add_option("--emit", simulate.emit, "full | express | suppress | all");
  simulate_cmd->add_option("--out-prefix", simulate.out_prefix, "Output path prefix")->required();
  simulate_cmd->add_option("--format", simulate.format, "bin | text");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate energies over an alpha grid and modes");
  add_problem_options(*sweep_cmd, sweep.base);
  sweep_cmd->add_option("--alphas", sweep.alphas, "start:end:step or comma list");
  sweep_cmd->add_option("--modes", sweep.modes, "Comma-separated modes (none allowed)")
      ->required();
  sweep_cmd->add_option("--output", sweep.base.output, "CSV path (stdout if omitted)");

  std::vector<std::string> argv_store{"orthoprompt"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (refine_cmd->parsed()) return cmd_refine(refine, out);
    if (analyze_cmd->parsed()) return cmd_analyze(analyze, out);
    if (simulate_cmd->parsed()) return cmd_simulate(simulate, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kExitUsage;
}

}  // namespace orthoprompt::cli
