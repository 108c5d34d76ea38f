// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include "tfront/losses.hpp"

namespace tfront {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

XentResult softmax_xent(const Vector& logits, int label) {
  if (label < 0 || label >= logits.size()) {
    throw ArgumentError("softmax_xent: label " + std::to_string(label) + " outside [0, " +
                        std::to_string(logits.size()) + ")");
  }
  const double top = logits.maxCoeff();
  const Vector shifted = logits.array() - top;
  const double log_z = std::log(shifted.array().exp().sum());
  XentResult r;
  r.loss = log_z - shifted(label);
  r.grad = (shifted.array() - log_z).exp().matrix();
  r.grad(label) -= 1.0;
  return r;
}

Matrix log_softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    const double top = logits.row(t).maxCoeff();
    const auto shifted = logits.row(t).array() - top;
    out.row(t) = shifted - std::log(shifted.exp().sum());
  }
  return out;
}

Matrix softmax_rows(const Matrix& logits) { return log_softmax_rows(logits).array().exp().matrix(); }

Matrix log_softmax_backward(const Matrix& upstream, const Matrix& log_probs) {
  require_shape(upstream, log_probs.rows(), log_probs.cols(), "log_softmax_backward");
  const Vector row_sums = upstream.rowwise().sum();
  Matrix out = upstream;
  const Matrix probs = log_probs.array().exp().matrix();
  for (Eigen::Index t = 0; t < out.rows(); ++t) out.row(t) -= row_sums(t) * probs.row(t);
  return out;
}

int ctc_min_frames(std::span<const int> target) {
  int frames = static_cast<int>(target.size());
  for (std::size_t i = 1; i < target.size(); ++i) {
    if (target[i] == target[i - 1]) ++frames;
  }
  return frames;
}

CtcResult ctc_loss(const Matrix& log_probs, std::span<const int> target, int blank) {
  const auto steps = static_cast<int>(log_probs.rows());
  const auto classes = static_cast<int>(log_probs.cols());
  if (target.empty()) throw ArgumentError("ctc: empty target");
  if (blank < 0 || blank >= classes) throw ArgumentError("ctc: blank index out of range");
  for (int s : target) {
    if (s < 0 || s >= classes || s == blank) throw ArgumentError("ctc: target symbol " + std::to_string(s) + " invalid");
  }
  if (steps < ctc_min_frames(target)) {
    throw InfeasibleAlignmentError("ctc: " + std::to_string(steps) + " frames cannot emit a target needing " +
                                   std::to_string(ctc_min_frames(target)));
  }

  // Extended label sequence: blank, l1, blank, l2, ..., blank.
  const int states = 2 * static_cast<int>(target.size()) + 1;
  std::vector<int> ext(static_cast<std::size_t>(states), blank);
  for (std::size_t i = 0; i < target.size(); ++i) ext[2 * i + 1] = target[i];
  const auto can_skip = [&](int s) { return s >= 2 && ext[static_cast<std::size_t>(s)] != blank &&
                                            ext[static_cast<std::size_t>(s)] != ext[static_cast<std::size_t>(s - 2)]; };

  Matrix alpha = Matrix::Constant(steps, states, kNegInf);
  Matrix beta = Matrix::Constant(steps, states, kNegInf);
  alpha(0, 0) = log_probs(0, ext[0]);
  alpha(0, 1) = log_probs(0, ext[1]);
  for (int t = 1; t < steps; ++t) {
    for (int s = 0; s < states; ++s) {
      double a = alpha(t - 1, s);
      if (s >= 1) a = log_add(a, alpha(t - 1, s - 1));
      if (can_skip(s)) a = log_add(a, alpha(t - 1, s - 2));
      alpha(t, s) = a == kNegInf ? kNegInf : a + log_probs(t, ext[static_cast<std::size_t>(s)]);
    }
  }
  beta(steps - 1, states - 1) = log_probs(steps - 1, ext[static_cast<std::size_t>(states - 1)]);
  beta(steps - 1, states - 2) = log_probs(steps - 1, ext[static_cast<std::size_t>(states - 2)]);
  for (int t = steps - 2; t >= 0; --t) {
    for (int s = 0; s < states; ++s) {
      double b = beta(t + 1, s);
      if (s + 1 < states) b = log_add(b, beta(t + 1, s + 1));
      if (s + 2 < states && can_skip(s + 2)) b = log_add(b, beta(t + 1, s + 2));
      beta(t, s) = b == kNegInf ? kNegInf : b + log_probs(t, ext[static_cast<std::size_t>(s)]);
    }
  }

  const double log_p = log_add(alpha(steps - 1, states - 1), alpha(steps - 1, states - 2));
  CtcResult r;
  r.loss = -log_p;
  r.grad = Matrix::Zero(steps, classes);
  // alpha and beta both include the emission at t, so the occupancy of
  // state s at t is alpha + beta - log_probs(t, ext[s]) - log_p.
  std::vector<double> acc(static_cast<std::size_t>(classes));
  for (int t = 0; t < steps; ++t) {
    std::fill(acc.begin(), acc.end(), kNegInf);
    for (int s = 0; s < states; ++s) {
      const auto k = static_cast<std::size_t>(ext[static_cast<std::size_t>(s)]);
      acc[k] = log_add(acc[k], alpha(t, s) + beta(t, s));
    }
    for (int k = 0; k < classes; ++k) {
      const double a = acc[static_cast<std::size_t>(k)];
      if (a != kNegInf) r.grad(t, k) = -std::exp(a - log_probs(t, k) - log_p);
    }
  }
  return r;
}

std::vector<int> greedy_ctc_decode(const Matrix& log_probs, int blank) {
  std::vector<int> out;
  int prev = -1;
  for (Eigen::Index t = 0; t < log_probs.rows(); ++t) {
    Eigen::Index best = 0;
    log_probs.row(t).maxCoeff(&best);
    const int sym = static_cast<int>(best);
    if (sym != prev && sym != blank) out.push_back(sym);
    prev = sym;
  }
  return out;
}

std::size_t edit_distance(std::span<const int> a, std::span<const int> b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double phone_error_rate(std::span<const int> hyp, std::span<const int> ref) {
  if (ref.empty()) throw ArgumentError("phone_error_rate: empty reference");
  return 100.0 * static_cast<double>(edit_distance(hyp, ref)) / static_cast<double>(ref.size());
}

}  // namespace tfront
