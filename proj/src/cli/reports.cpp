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

#include "orthoprompt/cli/reports.hpp"

#include <cstdio>
#include <optional>
#include <sstream>

namespace orthoprompt::cli {
namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

nlohmann::json to_json(const ModeReport& row) {
  return {
      {"mode", row.mode},
      {"alpha", row.alpha},
      {"granularity", std::string(to_string(row.granularity))},
      {"beta", row.rescale_factor},
      {"suppress_energy_before", row.suppress_energy_before},
      {"suppress_energy_after", row.suppress_energy_after},
      {"express_energy_before", row.express_energy_before},
      {"express_energy_after", row.express_energy_after},
      {"express_preserved", row.express_preserved},
      {"orthogonality_max_residual", row.orthogonality_max_residual},
      {"express_cosine_before", optional_number(row.express_cosine_before)},
      {"express_cosine_after", optional_number(row.express_cosine_after)},
      {"suppress_cosine_before", optional_number(row.suppress_cosine_before)},
      {"suppress_cosine_after", optional_number(row.suppress_cosine_after)},
      {"express_rank", row.express_rank},
      {"suppress_rank", row.suppress_rank},
  };
}

nlohmann::json to_json(const RefinementReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) rows.push_back(to_json(r));
  return {{"frame", report.frame_index}, {"rows", std::move(rows)}};
}

nlohmann::json to_json(const EntanglementReport& report) {
  nlohmann::json pairwise = nlohmann::json::array();
  for (const auto& row : report.pairwise) {
    nlohmann::json line = nlohmann::json::array();
    for (const auto& v : row) line.push_back(optional_number(v));
    pairwise.push_back(std::move(line));
  }
  return {{"pooling", std::string(to_string(report.pooling))},
          {"labels", report.labels},
          {"pairwise", std::move(pairwise)},
          {"per_segment_norms", report.per_segment_norms}};
}

std::string mode_csv_header() {
  return "mode,alpha,granularity,beta,suppress_energy_before,suppress_energy_after,"
         "express_energy_before,express_energy_after,express_preserved,"
         "orthogonality_max_residual,express_cosine_before,express_cosine_after,"
         "suppress_cosine_before,suppress_cosine_after";
}

std::string mode_csv_row(const ModeReport& r) {
  std::ostringstream out;
  out << r.mode << ',' << fmt(r.alpha) << ',' << to_string(r.granularity) << ','
      << fmt(r.rescale_factor) << ',' << fmt(r.suppress_energy_before) << ','
      << fmt(r.suppress_energy_after) << ',' << fmt(r.express_energy_before) << ','
      << fmt(r.express_energy_after) << ',' << (r.express_preserved ? "true" : "false")
      << ',' << fmt(r.orthogonality_max_residual) << ',' << fmt(r.express_cosine_before)
      << ',' << fmt(r.express_cosine_after) << ',' << fmt(r.suppress_cosine_before) << ','
      << fmt(r.suppress_cosine_after);
  return out.str();
}

std::string to_csv(const RefinementReport& report) {
  std::string out = mode_csv_header() + "\n";
  for (const auto& r : report.rows) out += mode_csv_row(r) + "\n";
  return out;
}

std::string to_csv(const EntanglementReport& report) {
  std::string out = "segment";
  for (const auto& l : report.labels) out += "," + l;
  out += "\n";
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    out += report.labels[i];
    for (const auto& v : report.pairwise[i]) out += "," + fmt(v);
    out += "\n";
  }
  return out;
}

}  // namespace orthoprompt::cli
