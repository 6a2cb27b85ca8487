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

#ifndef ORTHOPROMPT_CLI_COMMANDS_HPP_
#define ORTHOPROMPT_CLI_COMMANDS_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orthoprompt/error.hpp"

namespace orthoprompt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFormat = 3;
inline constexpr int kExitNumerical = 4;

int exit_code_for(ErrorKind kind) noexcept;

/// Parses "start:end:step" (inclusive of end) or a comma-separated list.
/// Throws kInvalidConfig on malformed input.
std::vector<double> parse_alpha_grid(std::string_view text);

/// Runs one invocation. args excludes the program name. Help goes to out,
/// diagnostics to err.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace orthoprompt::cli

#endif  // ORTHOPROMPT_CLI_COMMANDS_HPP_
