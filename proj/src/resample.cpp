// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tfront/common.hpp"
#include "tfront/signal_io.hpp"

namespace tfront {
namespace {

constexpr int kTapsPerPhase = 32;
constexpr double kKaiserBeta = 8.6;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double kaiser(double u) {
  if (std::abs(u) > 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - u * u)) /
         std::cyl_bessel_i(0.0, kKaiserBeta);
}

}  // namespace

WaveformClip resample_to_16k(const WaveformClip& clip) {
  if (clip.sample_rate_hz <= 0) throw ArgumentError("resample: sample rate must be positive");
  if (clip.sample_rate_hz == kSampleRate) return clip;

  // Output sample n sits at input position n * step / up, an exact rational.
  const int g = std::gcd(kSampleRate, clip.sample_rate_hz);
  const long long up = kSampleRate / g;
  const long long step = clip.sample_rate_hz / g;
  // Low-pass at the lower of the two Nyquist rates.
  const double cutoff = std::min(1.0, static_cast<double>(kSampleRate) / clip.sample_rate_hz);
  constexpr int half = kTapsPerPhase / 2;

  std::vector<double> table(static_cast<std::size_t>(up) * kTapsPerPhase);
  for (long long p = 0; p < up; ++p) {
    const double frac = static_cast<double>(p) / static_cast<double>(up);
    double* taps = &table[static_cast<std::size_t>(p) * kTapsPerPhase];
    for (int j = 0; j < kTapsPerPhase; ++j) {
      const double x = static_cast<double>(j - half + 1) - frac;
      taps[j] = cutoff * sinc(cutoff * x) * kaiser(x / half);
    }
  }

  const auto n_in = static_cast<long long>(clip.samples.size());
  const long long n_out = n_in * kSampleRate / clip.sample_rate_hz;
  WaveformClip out;
  out.sample_rate_hz = kSampleRate;
  out.label = clip.label;
  out.samples.resize(static_cast<std::size_t>(n_out));
  for (long long n = 0; n < n_out; ++n) {
    const long long pos = n * step;
    const long long base = pos / up;
    const long long phase = pos % up;
    const double* taps = &table[static_cast<std::size_t>(phase) * kTapsPerPhase];
    double acc = 0.0;
    for (int j = 0; j < kTapsPerPhase; ++j) {
      const long long idx = base + j - half + 1;
      if (idx >= 0 && idx < n_in) acc += taps[j] * clip.samples[static_cast<std::size_t>(idx)];
    }
    out.samples[static_cast<std::size_t>(n)] = std::clamp(acc, -1.0, 1.0);
  }
  return out;
}

std::vector<double> fix_length(std::vector<double> samples, std::size_t length) {
  samples.resize(length, 0.0);
  return samples;
}

}  // namespace tfront
