// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tfront/common.hpp"

namespace tfront {

// Parameter-bank files are a sequence of row-major matrix blocks:
//
//   name,rows,cols
//   v00,v01,...
//   ...
//
// Values use the shortest decimal form that reads back to the same double,
// so a write/read cycle is bit-exact. Lines starting with '#' are comments.
struct NamedMatrix {
  std::string name;
  Matrix values;
};

std::string format_bank(const std::vector<NamedMatrix>& blocks);
std::vector<NamedMatrix> parse_bank(std::string_view text);

void write_bank_file(const std::filesystem::path& path, const std::vector<NamedMatrix>& blocks);
std::vector<NamedMatrix> read_bank_file(const std::filesystem::path& path);

// Returns the block by name or throws FormatError.
const NamedMatrix& find_block(const std::vector<NamedMatrix>& blocks, std::string_view name);
const NamedMatrix* try_find_block(const std::vector<NamedMatrix>& blocks, std::string_view name);

std::string format_double(double v);

}  // namespace tfront
