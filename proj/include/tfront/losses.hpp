// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "tfront/common.hpp"

namespace tfront {

struct XentResult {
  double loss = 0.0;
  Vector grad;  // d loss / d logits = softmax - onehot
};

XentResult softmax_xent(const Vector& logits, int label);

// Row-wise softmax / log-softmax with max subtraction.
Matrix softmax_rows(const Matrix& logits);
Matrix log_softmax_rows(const Matrix& logits);
// Given d loss / d log_probs, returns d loss / d logits.
Matrix log_softmax_backward(const Matrix& upstream, const Matrix& log_probs);

// Smallest number of frames that can emit `target`: one per symbol plus a
// forced blank between equal neighbours.
int ctc_min_frames(std::span<const int> target);

struct CtcResult {
  double loss = 0.0;
  Matrix grad;  // d loss / d log_probs, [T, C]
};

// Negative log-likelihood of `target` under per-frame log-probabilities,
// summed over all blank-augmented alignments (log-space forward-backward).
// Throws InfeasibleAlignmentError when T < ctc_min_frames(target).
CtcResult ctc_loss(const Matrix& log_probs, std::span<const int> target, int blank);

// Per-frame argmax, collapse repeats, drop blanks.
std::vector<int> greedy_ctc_decode(const Matrix& log_probs, int blank);

// Levenshtein distance with unit costs.
std::size_t edit_distance(std::span<const int> a, std::span<const int> b);

// 100 * edit_distance / |ref|.
double phone_error_rate(std::span<const int> hyp, std::span<const int> ref);

}  // namespace tfront
