// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace tfront {

// All numerical work is done in 64-bit, row-major.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr int kSampleRate = 16000;
inline constexpr int kNfft = 480;
inline constexpr int kHop = 160;
inline constexpr int kStftBins = kNfft / 2 + 1;
inline constexpr double kBinHz = static_cast<double>(kSampleRate) / kNfft;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed container or file.
class FormatError : public Error {
 public:
  using Error::Error;
};

class UnsupportedEncodingError : public Error {
 public:
  using Error::Error;
};

// Bad caller-supplied value (out of range index, empty input, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Shapes disagree between a forward cache and a backward call, or between
// two operands.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class DegenerateFilterError : public Error {
 public:
  using Error::Error;
};

class InfeasibleAlignmentError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

inline void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                          const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ContractViolation(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                            std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  }
}

}  // namespace tfront
