// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tfront/common.hpp"

namespace tfront {

// Nonnegative [frames x bins] feature matrix. Bins are STFT bins for the
// magnitude stage and Mel channels after the filterbank.
struct Spectrogram {
  Matrix frames;
  double hop_seconds = static_cast<double>(kHop) / kSampleRate;
};

// Periodic Hann window, w[k] = 0.5 (1 - cos(2 pi k / n)).
std::vector<double> make_hann_window(int n);

// ---------------------------------------------------------------------------
// STFT kernel bank
// ---------------------------------------------------------------------------

// Row k holds the time-domain taps of bin k. The window is baked into the
// initial taps; once trainable the kernels are free parameters.
struct StftKernelBank {
  Matrix real;  // [n_fft/2 + 1, n_fft]
  Matrix imag;
  std::vector<double> window;
  int n_fft = kNfft;
  int hop = kHop;
  bool trainable = false;

  int n_bins() const { return static_cast<int>(real.rows()); }
};

StftKernelBank init_stft_kernels(int n_fft = kNfft, int hop = kHop);

// Number of frames under center padding: floor(length / hop) + 1.
int stft_frame_count(std::size_t length, int hop);

// Intermediate values kept by stft_forward for the backward pass.
struct StftCache {
  std::size_t signal_length = 0;
  Matrix frames;  // [T_f, n_fft] windows of the reflect-padded signal
  Matrix re;      // [T_f, bins]
  Matrix im;
  Matrix magnitude;
};

inline constexpr double kMagnitudeEps = 1e-12;

// magnitude(t, k) = sqrt(re^2 + im^2 + eps) over frames of the signal
// reflect-padded by n_fft/2 on each side.
Spectrogram stft_forward(std::span<const double> samples, const StftKernelBank& bank,
                         StftCache* cache = nullptr);

struct StftGrads {
  Matrix real;                // same shape as the kernels
  Matrix imag;
  std::vector<double> input;  // empty unless requested
};

StftGrads stft_backward(const Matrix& upstream, const StftCache& cache, const StftKernelBank& bank,
                        bool want_input_grad = false);

// ---------------------------------------------------------------------------
// Mel filterbank
// ---------------------------------------------------------------------------

enum class MelStyle { FreeForm, ShapeConstrained };

std::string_view mel_style_name(MelStyle style);
MelStyle parse_mel_style(std::string_view name);

// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

struct MelFilterBank {
  MelStyle style = MelStyle::FreeForm;
  // [n_mels, n_bins]. FreeForm: the trainable parameters. ShapeConstrained:
  // materialized from centers / raw_widths; call rematerialize() after edits.
  Matrix weights;
  std::vector<double> centers_mel;  // ShapeConstrained only
  std::vector<double> raw_widths;   // width = softplus(raw)
  std::vector<double> bin_mels;     // mel value of each STFT bin centre
  double fmin_hz = 0.0;
  double fmax_hz = 8000.0;
  bool trainable = false;

  int n_mels() const { return static_cast<int>(weights.rows()); }
  int n_bins() const { return static_cast<int>(weights.cols()); }
  double width_mel(int j) const;

  // Continuous triangle response of constrained filter j at a mel value.
  double triangle_response(int j, double mel) const;

  // Peak amplitude of each filter. FreeForm: the row maximum. Constrained:
  // the apex height of the triangle, which is 1 by construction.
  std::vector<double> peak_amplitudes() const;

  void rematerialize();
  // Post-update projection: FreeForm weights into [0, 1], constrained
  // centres into [mel(fmin), mel(fmax)].
  void clamp_parameters();
};

// n_mels + 2 Hz boundary points equally spaced on the mel axis.
std::vector<double> mel_boundaries_hz(int n_mels, double fmin_hz, double fmax_hz);

// Triangles over consecutive boundary triplets with peak 2 / (f[j+2] - f[j]),
// scaled so the largest entry is 1.
MelFilterBank init_mel_freeform(int n_mels, double fmin_hz = 0.0, double fmax_hz = 8000.0,
                                int n_bins = kStftBins);

// Unit-apex triangles centred on the interior boundary points.
MelFilterBank init_mel_constrained(int n_mels, double fmin_hz = 0.0, double fmax_hz = 8000.0,
                                   int n_bins = kStftBins);

// FreeForm bank with weights ~ Uniform[0, 1].
MelFilterBank init_mel_random(int n_mels, std::uint64_t seed, int n_bins = kStftBins);

// weights[j][k] = max(0, 1 - |bin_mels[k] - centers[j]| / widths[j]).
Matrix materialize_constrained(std::span<const double> centers_mel, std::span<const double> widths_mel,
                               std::span<const double> bin_mels);

// Mel values of the n_bins STFT bin centres at bin spacing kBinHz.
std::vector<double> stft_bin_mels(int n_bins);

Spectrogram mel_forward(const Spectrogram& magnitude, const MelFilterBank& bank);

struct MelGrads {
  Matrix weights;                   // d loss / d materialized weights
  std::vector<double> centers_mel;  // ShapeConstrained only
  std::vector<double> raw_widths;
  Matrix input;                     // empty unless requested
};

MelGrads mel_backward(const Matrix& upstream, const Spectrogram& magnitude, const MelFilterBank& bank,
                      bool want_input_grad = false);

// ---------------------------------------------------------------------------
// Masking
// ---------------------------------------------------------------------------

// Inclusive STFT-bin intervals that are zeroed before the filterbank.
struct MaskSpec {
  std::vector<std::pair<int, int>> bin_ranges;

  bool empty() const { return bin_ranges.empty(); }
  int masked_count(int n_bins = kStftBins) const;
  std::string to_string() const;  // "25-49,216-240" or "none"
};

// Parses "25-49,216-240" (or "none" / "") and validates the ranges.
MaskSpec parse_mask(std::string_view text, int n_bins = kStftBins);
void validate_mask(const MaskSpec& spec, int n_bins = kStftBins);

// Zeroes the masked columns in place. Applied to the magnitude on the
// forward pass and to its gradient on the backward pass.
void apply_mask_inplace(Matrix& m, const MaskSpec& spec);
Spectrogram apply_mask(const Spectrogram& magnitude, const MaskSpec& spec);

}  // namespace tfront
