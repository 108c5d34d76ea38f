// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include "tfront/common.hpp"
#include "tfront/frontend.hpp"

namespace tfront {

// Mixed-radix decimation-in-time FFT for any length (prime factors fall back
// to a direct DFT of that factor).
std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& x);

// Sum of all Mel filters per STFT bin, divided by its maximum.
// Throws ArgumentError for an all-zero bank.
std::vector<double> cumulative_importance(const MelFilterBank& bank);

// One-sided |DFT| (n_fft/2 + 1 values) of real + i*imag for one kernel row.
// Index m corresponds to m * sample_rate / n_fft Hz.
std::vector<double> kernel_dft(const StftKernelBank& bank, int bin);

// Sum of kernel_dft over every bin, divided by its maximum.
std::vector<double> stft_cumulative_importance(const StftKernelBank& bank);

// Frequency in Hz of spectrum index m for an n_fft-point DFT at 16 kHz.
inline double dft_index_hz(int m, int n_fft = kNfft) { return static_cast<double>(m) * kSampleRate / n_fft; }

// Single-block bank-format exports.
void export_bank_csv(const Matrix& values, const std::string& name, const std::filesystem::path& path);
void export_vector_csv(const std::vector<double>& values, const std::string& name,
                       const std::filesystem::path& path);

}  // namespace tfront
