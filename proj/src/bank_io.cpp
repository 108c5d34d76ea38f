// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfront/bank_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace tfront {
namespace {

std::string_view next_line(std::string_view text, std::size_t& pos) {
  const auto end = text.find('\n', pos);
  std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
  pos = end == std::string_view::npos ? text.size() : end + 1;
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

long parse_count(std::string_view s) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
    throw FormatError("bank: bad dimension '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_bank(const std::vector<NamedMatrix>& blocks) {
  std::string out;
  for (const auto& b : blocks) {
    if (b.name.find(',') != std::string::npos || b.name.find('\n') != std::string::npos) {
      throw ArgumentError("bank: block name may not contain ',' or newline");
    }
    out += b.name + "," + std::to_string(b.values.rows()) + "," + std::to_string(b.values.cols()) + "\n";
    for (Eigen::Index i = 0; i < b.values.rows(); ++i) {
      for (Eigen::Index j = 0; j < b.values.cols(); ++j) {
        if (j) out += ',';
        out += format_double(b.values(i, j));
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<NamedMatrix> parse_bank(std::string_view text) {
  std::vector<NamedMatrix> blocks;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::string_view header = next_line(text, pos);
    if (header.empty() || header.front() == '#') continue;
    const auto c2 = header.rfind(',');
    const auto c1 = c2 == std::string_view::npos ? c2 : header.rfind(',', c2 - 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
      throw FormatError("bank: bad block header '" + std::string(header) + "'");
    }
    NamedMatrix block;
    block.name = std::string(header.substr(0, c1));
    const long rows = parse_count(header.substr(c1 + 1, c2 - c1 - 1));
    const long cols = parse_count(header.substr(c2 + 1));
    block.values.resize(rows, cols);
    for (long i = 0; i < rows; ++i) {
      if (pos >= text.size()) throw FormatError("bank: block '" + block.name + "' truncated");
      const std::string_view line = next_line(text, pos);
      const char* p = line.data();
      const char* end = line.data() + line.size();
      for (long j = 0; j < cols; ++j) {
        if (j) {
          if (p == end || *p != ',') throw FormatError("bank: block '" + block.name + "' row has too few values");
          ++p;
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(p, end, v);
        if (ec != std::errc()) throw FormatError("bank: bad value in block '" + block.name + "'");
        block.values(i, j) = v;
        p = ptr;
      }
      if (p != end) throw FormatError("bank: block '" + block.name + "' row has too many values");
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

void write_bank_file(const std::filesystem::path& path, const std::vector<NamedMatrix>& blocks) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << format_bank(blocks);
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<NamedMatrix> read_bank_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_bank(buf.str());
}

const NamedMatrix* try_find_block(const std::vector<NamedMatrix>& blocks, std::string_view name) {
  for (const auto& b : blocks) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

const NamedMatrix& find_block(const std::vector<NamedMatrix>& blocks, std::string_view name) {
  if (const auto* b = try_find_block(blocks, name)) return *b;
  throw FormatError("bank: missing block '" + std::string(name) + "'");
}

}  // namespace tfront
