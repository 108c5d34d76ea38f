// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfront/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tfront/bank_io.hpp"

namespace tfront {
namespace {

using cd = std::complex<double>;

int smallest_factor(int n) {
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) return p;
  }
  return n;
}

void fft_rec(const cd* in, std::size_t stride, cd* out, int n) {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const int p = smallest_factor(n);
  const int m = n / p;
  if (m == 1) {
    for (int k = 0; k < n; ++k) {
      cd acc = 0.0;
      for (int j = 0; j < n; ++j) {
        acc += in[j * stride] * std::polar(1.0, -2.0 * std::numbers::pi * ((static_cast<long>(j) * k) % n) / n);
      }
      out[k] = acc;
    }
    return;
  }
  // p interleaved sub-transforms of length m.
  std::vector<cd> sub(static_cast<std::size_t>(n));
  for (int r = 0; r < p; ++r) fft_rec(in + r * stride, stride * p, sub.data() + r * m, m);
  for (int k = 0; k < m; ++k) {
    for (int q = 0; q < p; ++q) {
      const int idx = k + q * m;
      cd acc = 0.0;
      for (int r = 0; r < p; ++r) {
        const long e = (static_cast<long>(r) * idx) % n;
        acc += sub[static_cast<std::size_t>(r * m + k)] * std::polar(1.0, -2.0 * std::numbers::pi * e / n);
      }
      out[idx] = acc;
    }
  }
}

std::vector<double> normalized_by_max(std::vector<double> v, const char* what) {
  const double top = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  if (!(top > 0.0)) throw ArgumentError(std::string(what) + ": cannot normalize an all-zero profile");
  for (double& x : v) x /= top;
  return v;
}

}  // namespace

std::vector<cd> fft(const std::vector<cd>& x) {
  std::vector<cd> out(x.size());
  if (!x.empty()) fft_rec(x.data(), 1, out.data(), static_cast<int>(x.size()));
  return out;
}

std::vector<double> cumulative_importance(const MelFilterBank& bank) {
  std::vector<double> v(static_cast<std::size_t>(bank.n_bins()), 0.0);
  for (int j = 0; j < bank.n_mels(); ++j) {
    for (int k = 0; k < bank.n_bins(); ++k) v[static_cast<std::size_t>(k)] += bank.weights(j, k);
  }
  return normalized_by_max(std::move(v), "cumulative_importance");
}

std::vector<double> kernel_dft(const StftKernelBank& bank, int bin) {
  if (bin < 0 || bin >= bank.n_bins()) throw ArgumentError("kernel_dft: bin " + std::to_string(bin) + " out of range");
  std::vector<cd> row(static_cast<std::size_t>(bank.n_fft));
  for (int n = 0; n < bank.n_fft; ++n) row[static_cast<std::size_t>(n)] = cd(bank.real(bin, n), bank.imag(bin, n));
  const auto spec = fft(row);
  std::vector<double> out(static_cast<std::size_t>(bank.n_fft / 2 + 1));
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = std::abs(spec[m]);
  return out;
}

std::vector<double> stft_cumulative_importance(const StftKernelBank& bank) {
  std::vector<double> total(static_cast<std::size_t>(bank.n_fft / 2 + 1), 0.0);
  for (int k = 0; k < bank.n_bins(); ++k) {
    const auto spec = kernel_dft(bank, k);
    for (std::size_t m = 0; m < total.size(); ++m) total[m] += spec[m];
  }
  return normalized_by_max(std::move(total), "stft_cumulative_importance");
}

void export_bank_csv(const Matrix& values, const std::string& name, const std::filesystem::path& path) {
  write_bank_file(path, {NamedMatrix{name, values}});
}

void export_vector_csv(const std::vector<double>& values, const std::string& name,
                       const std::filesystem::path& path) {
  Matrix m(static_cast<Eigen::Index>(values.size()), 1);
  for (std::size_t i = 0; i < values.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = values[i];
  export_bank_csv(m, name, path);
}

}  // namespace tfront
