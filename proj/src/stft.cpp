// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "tfront/frontend.hpp"

#include <algorithm>

namespace tfront {
namespace {

// Maps a (possibly out of range) signal index onto [0, length) by mirror
// reflection without repeating the edge sample.
std::size_t reflect_index(long long i, std::size_t length) {
  if (length == 1) return 0;
  const auto n = static_cast<long long>(length);
  const long long period = 2 * (n - 1);
  long long r = i % period;
  if (r < 0) r += period;
  return static_cast<std::size_t>(r < n ? r : period - r);
}

}  // namespace

std::vector<double> make_hann_window(int n) {
  if (n < 1) throw ArgumentError("hann window length must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) w[static_cast<std::size_t>(k)] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * k / n));
  return w;
}

StftKernelBank init_stft_kernels(int n_fft, int hop) {
  if (n_fft < 2 || n_fft % 2 != 0) throw ArgumentError("n_fft must be even and >= 2");
  if (hop < 1) throw ArgumentError("hop must be >= 1");
  StftKernelBank bank;
  bank.n_fft = n_fft;
  bank.hop = hop;
  bank.window = make_hann_window(n_fft);
  const int bins = n_fft / 2 + 1;
  bank.real.resize(bins, n_fft);
  bank.imag.resize(bins, n_fft);
  for (int k = 0; k < bins; ++k) {
    for (int n = 0; n < n_fft; ++n) {
      // Reduce k*n mod n_fft first so the angle stays in [0, 2 pi).
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * n) % n_fft) / n_fft;
      const double w = bank.window[static_cast<std::size_t>(n)];
      bank.real(k, n) = w * std::cos(angle);
      bank.imag(k, n) = w * std::sin(angle);
    }
  }
  // sin(pi n) and sin(0) are exactly zero.
  bank.imag.row(0).setZero();
  bank.imag.row(bins - 1).setZero();
  return bank;
}

int stft_frame_count(std::size_t length, int hop) { return static_cast<int>(length / static_cast<std::size_t>(hop)) + 1; }

Spectrogram stft_forward(std::span<const double> samples, const StftKernelBank& bank, StftCache* cache) {
  if (samples.empty()) throw ArgumentError("stft: empty signal");
  const int n_fft = bank.n_fft;
  const int frames_count = stft_frame_count(samples.size(), bank.hop);
  const long long pad = n_fft / 2;

  Matrix frames(frames_count, n_fft);
  const auto length = static_cast<long long>(samples.size());
  for (int t = 0; t < frames_count; ++t) {
    const long long start = static_cast<long long>(t) * bank.hop - pad;
    if (start >= 0 && start + n_fft <= length) {
      std::copy_n(samples.begin() + start, n_fft, &frames(t, 0));
      continue;
    }
    for (int n = 0; n < n_fft; ++n) frames(t, n) = samples[reflect_index(start + n, samples.size())];
  }

  Matrix re = frames * bank.real.transpose();
  Matrix im = frames * bank.imag.transpose();
  Spectrogram out;
  out.hop_seconds = static_cast<double>(bank.hop) / kSampleRate;
  out.frames = (re.array().square() + im.array().square() + kMagnitudeEps).sqrt().matrix();

  if (cache) {
    cache->signal_length = samples.size();
    cache->frames = std::move(frames);
    cache->re = std::move(re);
    cache->im = std::move(im);
    cache->magnitude = out.frames;
  }
  return out;
}

StftGrads stft_backward(const Matrix& upstream, const StftCache& cache, const StftKernelBank& bank,
                        bool want_input_grad) {
  require_shape(upstream, cache.magnitude.rows(), cache.magnitude.cols(), "stft_backward upstream");
  require_shape(cache.frames, cache.magnitude.rows(), bank.n_fft, "stft_backward cache frames");
  require_shape(bank.real, cache.magnitude.cols(), bank.n_fft, "stft_backward kernels");

  // d|z|/d re = re / |z|, likewise for im.
  const Matrix scale = (upstream.array() / cache.magnitude.array()).matrix();
  const Matrix d_re = (scale.array() * cache.re.array()).matrix();
  const Matrix d_im = (scale.array() * cache.im.array()).matrix();

  StftGrads g;
  g.real.noalias() = d_re.transpose() * cache.frames;
  g.imag.noalias() = d_im.transpose() * cache.frames;

  if (want_input_grad) {
    Matrix d_frames = d_re * bank.real;
    d_frames.noalias() += d_im * bank.imag;
    g.input.assign(cache.signal_length, 0.0);
    const long long pad = bank.n_fft / 2;
    for (Eigen::Index t = 0; t < d_frames.rows(); ++t) {
      const long long start = static_cast<long long>(t) * bank.hop - pad;
      for (int n = 0; n < bank.n_fft; ++n) {
        g.input[reflect_index(start + n, cache.signal_length)] += d_frames(t, n);
      }
    }
  }
  return g;
}

}  // namespace tfront
