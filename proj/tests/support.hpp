// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "tfront/common.hpp"
#include "tfront/rng.hpp"

namespace testing {

inline std::vector<double> random_signal(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  tfront::Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = scale * rng.uniform(-1.0, 1.0);
  return x;
}

inline tfront::Matrix random_matrix(int rows, int cols, tfront::Rng& rng, double lo = -1.0, double hi = 1.0) {
  tfront::Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
  }
  return m;
}

// |X[m]| of a length-n sequence, m in [0, n/2].
inline std::vector<double> naive_dft_magnitude(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<double> out(n / 2 + 1);
  for (std::size_t m = 0; m < out.size(); ++m) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>((m * i) % n) / static_cast<double>(n);
      acc += x[i] * std::complex<double>(std::cos(a), std::sin(a));
    }
    out[m] = std::abs(acc);
  }
  return out;
}

// Central difference of f along coordinate `i` of `p`.
inline double numeric_partial(const std::function<double()>& f, double& p, double h = 1e-5) {
  const double keep = p;
  p = keep + h;
  const double up = f();
  p = keep - h;
  const double down = f();
  p = keep;
  return (up - down) / (2.0 * h);
}

inline double rel_err(double a, double b) {
  const double d = std::max({std::abs(a), std::abs(b), 1e-8});
  return std::abs(a - b) / d;
}

inline std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("tfront_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Little-endian RIFF/WAVE builder for parser tests.
struct WavSpec {
  std::uint16_t format = 1;
  std::uint16_t channels = 1;
  std::uint32_t rate = 16000;
  std::uint16_t bits = 16;
};

inline void put16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_tag(std::vector<std::uint8_t>& b, const char* t) { b.insert(b.end(), t, t + 4); }

inline std::vector<std::uint8_t> make_wav(const WavSpec& s, const std::vector<std::uint8_t>& payload) {
  std::vector<std::uint8_t> b;
  put_tag(b, "RIFF");
  put32(b, static_cast<std::uint32_t>(4 + 8 + 16 + 8 + payload.size()));
  put_tag(b, "WAVE");
  put_tag(b, "fmt ");
  put32(b, 16);
  put16(b, s.format);
  put16(b, s.channels);
  put32(b, s.rate);
  const std::uint16_t align = static_cast<std::uint16_t>(s.channels * s.bits / 8);
  put32(b, s.rate * align);
  put16(b, align);
  put16(b, s.bits);
  put_tag(b, "data");
  put32(b, static_cast<std::uint32_t>(payload.size()));
  b.insert(b.end(), payload.begin(), payload.end());
  return b;
}

}  // namespace testing
