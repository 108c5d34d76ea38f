// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "tfront/frontend.hpp"
#include "tfront/rng.hpp"

namespace tfront {
namespace {

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }
double inverse_softplus(double y) { return y > 30.0 ? y : std::log(std::expm1(y)); }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_range(int n_mels, double fmin_hz, double fmax_hz) {
  if (n_mels < 1) throw ArgumentError("n_mels must be >= 1");
  if (fmin_hz < 0.0 || fmax_hz <= fmin_hz) throw ArgumentError("mel range must satisfy 0 <= fmin < fmax");
}

}  // namespace

std::string_view mel_style_name(MelStyle style) {
  return style == MelStyle::FreeForm ? "freeform" : "constrained";
}

MelStyle parse_mel_style(std::string_view name) {
  if (name == "freeform") return MelStyle::FreeForm;
  if (name == "constrained") return MelStyle::ShapeConstrained;
  throw ArgumentError("unknown mel style '" + std::string(name) + "' (expected freeform or constrained)");
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> stft_bin_mels(int n_bins) {
  std::vector<double> out(static_cast<std::size_t>(n_bins));
  for (int k = 0; k < n_bins; ++k) out[static_cast<std::size_t>(k)] = hz_to_mel(k * kBinHz);
  return out;
}

std::vector<double> mel_boundaries_hz(int n_mels, double fmin_hz, double fmax_hz) {
  check_range(n_mels, fmin_hz, fmax_hz);
  const double lo = hz_to_mel(fmin_hz);
  const double hi = hz_to_mel(fmax_hz);
  std::vector<double> out(static_cast<std::size_t>(n_mels) + 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_mels + 1));
  }
  out.front() = fmin_hz;
  out.back() = fmax_hz;
  return out;
}

MelFilterBank init_mel_freeform(int n_mels, double fmin_hz, double fmax_hz, int n_bins) {
  const auto f = mel_boundaries_hz(n_mels, fmin_hz, fmax_hz);
  MelFilterBank bank;
  bank.style = MelStyle::FreeForm;
  bank.fmin_hz = fmin_hz;
  bank.fmax_hz = fmax_hz;
  bank.bin_mels = stft_bin_mels(n_bins);
  bank.weights = Matrix::Zero(n_mels, n_bins);

  // Each sampled triangle is brought to its nominal peak height
  // 2 / (f[j+2] - f[j]); without that step the bin grid makes the sampled
  // peaks jitter and narrow low filters can come out shorter than wider
  // neighbours.
  const double top = 2.0 / (f[2] - f[0]);
  for (int j = 0; j < n_mels; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const double lo = f[ju], mid = f[ju + 1], hi = f[ju + 2];
    double row_max = 0.0;
    for (int k = 0; k < n_bins; ++k) {
      const double hz = k * kBinHz;
      const double v = std::max(0.0, std::min((hz - lo) / (mid - lo), (hi - hz) / (hi - mid)));
      bank.weights(j, k) = v;
      row_max = std::max(row_max, v);
    }
    if (row_max <= 0.0) {
      throw DegenerateFilterError("mel filter " + std::to_string(j) + " of " + std::to_string(n_mels) +
                                  " covers no STFT bin; reduce n_mels");
    }
    const double height = (2.0 / (hi - lo)) / top;
    bank.weights.row(j) *= height / row_max;
  }
  return bank;
}

MelFilterBank init_mel_constrained(int n_mels, double fmin_hz, double fmax_hz, int n_bins) {
  check_range(n_mels, fmin_hz, fmax_hz);
  const double lo = hz_to_mel(fmin_hz);
  const double hi = hz_to_mel(fmax_hz);
  const double spacing = (hi - lo) / (n_mels + 1);
  MelFilterBank bank;
  bank.style = MelStyle::ShapeConstrained;
  bank.fmin_hz = fmin_hz;
  bank.fmax_hz = fmax_hz;
  bank.bin_mels = stft_bin_mels(n_bins);
  for (int j = 0; j < n_mels; ++j) {
    bank.centers_mel.push_back(lo + spacing * (j + 1));
    bank.raw_widths.push_back(inverse_softplus(spacing));
  }
  bank.rematerialize();
  for (int j = 0; j < n_mels; ++j) {
    if (bank.weights.row(j).maxCoeff() <= 0.0) {
      throw DegenerateFilterError("mel filter " + std::to_string(j) + " of " + std::to_string(n_mels) +
                                  " covers no STFT bin; reduce n_mels");
    }
  }
  return bank;
}

MelFilterBank init_mel_random(int n_mels, std::uint64_t seed, int n_bins) {
  if (n_mels < 1) throw ArgumentError("n_mels must be >= 1");
  MelFilterBank bank;
  bank.style = MelStyle::FreeForm;
  bank.bin_mels = stft_bin_mels(n_bins);
  bank.weights.resize(n_mels, n_bins);
  Rng rng(seed);
  for (int j = 0; j < n_mels; ++j) {
    for (int k = 0; k < n_bins; ++k) bank.weights(j, k) = rng.uniform();
  }
  return bank;
}

Matrix materialize_constrained(std::span<const double> centers_mel, std::span<const double> widths_mel,
                               std::span<const double> bin_mels) {
  if (centers_mel.size() != widths_mel.size()) throw ContractViolation("centers/widths size mismatch");
  Matrix w(static_cast<Eigen::Index>(centers_mel.size()), static_cast<Eigen::Index>(bin_mels.size()));
  for (std::size_t j = 0; j < centers_mel.size(); ++j) {
    for (std::size_t k = 0; k < bin_mels.size(); ++k) {
      w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          std::max(0.0, 1.0 - std::abs(bin_mels[k] - centers_mel[j]) / widths_mel[j]);
    }
  }
  return w;
}

double MelFilterBank::width_mel(int j) const { return softplus(raw_widths.at(static_cast<std::size_t>(j))); }

double MelFilterBank::triangle_response(int j, double mel) const {
  const auto ju = static_cast<std::size_t>(j);
  return std::max(0.0, 1.0 - std::abs(mel - centers_mel.at(ju)) / width_mel(j));
}

std::vector<double> MelFilterBank::peak_amplitudes() const {
  std::vector<double> out(static_cast<std::size_t>(n_mels()));
  for (int j = 0; j < n_mels(); ++j) {
    out[static_cast<std::size_t>(j)] =
        style == MelStyle::FreeForm ? weights.row(j).maxCoeff() : triangle_response(j, centers_mel[static_cast<std::size_t>(j)]);
  }
  return out;
}

void MelFilterBank::rematerialize() {
  if (style != MelStyle::ShapeConstrained) return;
  std::vector<double> widths(raw_widths.size());
  for (std::size_t j = 0; j < widths.size(); ++j) widths[j] = softplus(raw_widths[j]);
  weights = materialize_constrained(centers_mel, widths, bin_mels);
}

void MelFilterBank::clamp_parameters() {
  if (style == MelStyle::FreeForm) {
    weights = weights.cwiseMax(0.0).cwiseMin(1.0);
    return;
  }
  const double lo = hz_to_mel(fmin_hz);
  const double hi = hz_to_mel(fmax_hz);
  for (double& c : centers_mel) c = std::clamp(c, lo, hi);
  rematerialize();
}

Spectrogram mel_forward(const Spectrogram& magnitude, const MelFilterBank& bank) {
  if (magnitude.frames.cols() != bank.n_bins()) {
    throw ContractViolation("mel_forward: spectrogram has " + std::to_string(magnitude.frames.cols()) +
                            " bins, bank expects " + std::to_string(bank.n_bins()));
  }
  Spectrogram out;
  out.hop_seconds = magnitude.hop_seconds;
  out.frames.noalias() = magnitude.frames * bank.weights.transpose();
  return out;
}

MelGrads mel_backward(const Matrix& upstream, const Spectrogram& magnitude, const MelFilterBank& bank,
                      bool want_input_grad) {
  require_shape(upstream, magnitude.frames.rows(), bank.n_mels(), "mel_backward upstream");
  require_shape(magnitude.frames, upstream.rows(), bank.n_bins(), "mel_backward magnitude");
  MelGrads g;
  g.weights.noalias() = upstream.transpose() * magnitude.frames;
  if (want_input_grad) g.input.noalias() = upstream * bank.weights;

  if (bank.style == MelStyle::ShapeConstrained) {
    const int n_mels = bank.n_mels();
    g.centers_mel.assign(static_cast<std::size_t>(n_mels), 0.0);
    g.raw_widths.assign(static_cast<std::size_t>(n_mels), 0.0);
    for (int j = 0; j < n_mels; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      const double width = bank.width_mel(j);
      const double c = bank.centers_mel[ju];
      double d_center = 0.0;
      double d_width = 0.0;
      for (int k = 0; k < bank.n_bins(); ++k) {
        const double d = bank.bin_mels[static_cast<std::size_t>(k)] - c;
        const double a = std::abs(d);
        // Strict interior of either slope; apex and feet get subgradient 0.
        if (a >= width || d == 0.0) continue;
        const double gw = g.weights(j, k);
        d_center += gw * (d > 0.0 ? 1.0 : -1.0) / width;
        d_width += gw * a / (width * width);
      }
      g.centers_mel[ju] = d_center;
      g.raw_widths[ju] = d_width * sigmoid(bank.raw_widths[ju]);
    }
  }
  return g;
}

// --- masking ----------------------------------------------------------------

int MaskSpec::masked_count(int n_bins) const {
  std::vector<bool> hit(static_cast<std::size_t>(n_bins), false);
  for (auto [lo, hi] : bin_ranges) {
    for (int k = lo; k <= hi && k < n_bins; ++k) hit[static_cast<std::size_t>(k)] = true;
  }
  return static_cast<int>(std::count(hit.begin(), hit.end(), true));
}

std::string MaskSpec::to_string() const {
  if (bin_ranges.empty()) return "none";
  std::string out;
  for (auto [lo, hi] : bin_ranges) {
    if (!out.empty()) out += ",";
    out += std::to_string(lo) + "-" + std::to_string(hi);
  }
  return out;
}

void validate_mask(const MaskSpec& spec, int n_bins) {
  for (auto [lo, hi] : spec.bin_ranges) {
    if (lo < 0 || hi < lo || hi >= n_bins) {
      throw ArgumentError("mask range " + std::to_string(lo) + "-" + std::to_string(hi) +
                          " outside [0, " + std::to_string(n_bins - 1) + "]");
    }
  }
}

MaskSpec parse_mask(std::string_view text, int n_bins) {
  MaskSpec spec;
  if (text.empty() || text == "none") return spec;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string item(text.substr(start, end - start));
    const auto dash = item.find('-');
    try {
      std::size_t used = 0;
      if (dash == std::string::npos) {
        const int k = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument("trailing");
        spec.bin_ranges.emplace_back(k, k);
      } else {
        const std::string a = item.substr(0, dash), b = item.substr(dash + 1);
        const int lo = std::stoi(a, &used);
        if (used != a.size()) throw std::invalid_argument("trailing");
        const int hi = std::stoi(b, &used);
        if (used != b.size()) throw std::invalid_argument("trailing");
        spec.bin_ranges.emplace_back(lo, hi);
      }
    } catch (const std::logic_error&) {
      throw ArgumentError("bad mask range '" + item + "' (expected lo-hi)");
    }
    start = end + 1;
  }
  validate_mask(spec, n_bins);
  return spec;
}

void apply_mask_inplace(Matrix& m, const MaskSpec& spec) {
  for (auto [lo, hi] : spec.bin_ranges) {
    const int stop = std::min<int>(hi, static_cast<int>(m.cols()) - 1);
    if (lo <= stop) m.middleCols(lo, stop - lo + 1).setZero();
  }
}

Spectrogram apply_mask(const Spectrogram& magnitude, const MaskSpec& spec) {
  validate_mask(spec, static_cast<int>(magnitude.frames.cols()));
  Spectrogram out = magnitude;
  apply_mask_inplace(out.frames, spec);
  return out;
}

}  // namespace tfront
