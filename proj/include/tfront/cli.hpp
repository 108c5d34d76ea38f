// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tfront {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// args[0] is the program name. Results go to `out`, diagnostics and usage
// text to `err` (help requested explicitly goes to `out`).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Flat key=value config: '#' starts a comment, blank lines are skipped, keys
// are long flag names without the dashes.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

}  // namespace tfront
