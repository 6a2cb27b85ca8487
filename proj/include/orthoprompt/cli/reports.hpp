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

#ifndef ORTHOPROMPT_CLI_REPORTS_HPP_
#define ORTHOPROMPT_CLI_REPORTS_HPP_

#include <string>

#include <json.hpp>

#include "orthoprompt/metrics.hpp"

namespace orthoprompt::cli {

/// Flat object. The keys mode, alpha, suppress_energy_before,
/// suppress_energy_after, express_energy_before, express_energy_after,
/// express_preserved and orthogonality_max_residual are fixed; cosine fields
/// are null when undefined.
nlohmann::json to_json(const ModeReport& row);
nlohmann::json to_json(const RefinementReport& report);
nlohmann::json to_json(const EntanglementReport& report);

/// Header line plus one line per row.
std::string to_csv(const RefinementReport& report);
std::string to_csv(const EntanglementReport& report);

/// Column header used by the sweep table and report CSVs.
std::string mode_csv_header();
std::string mode_csv_row(const ModeReport& row);

}  // namespace orthoprompt::cli

#endif  // ORTHOPROMPT_CLI_REPORTS_HPP_
