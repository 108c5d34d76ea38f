// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tfront/common.hpp"
#include "tfront/rng.hpp"

namespace tfront {

// ---------------------------------------------------------------------------
// Linear head: logits = x W^T + b, one row per example / frame.
// ---------------------------------------------------------------------------

struct LinearHead {
  Matrix weight;  // [C, D]
  Vector bias;    // [C]

  int out_dim() const { return static_cast<int>(weight.rows()); }
  int in_dim() const { return static_cast<int>(weight.cols()); }
};

// Uniform(-1/sqrt(D), 1/sqrt(D)) for weight and bias.
LinearHead init_linear(int out_dim, int in_dim, Rng& rng);

// x: [rows, D] -> [rows, C].
Matrix linear_forward(const Matrix& x, const LinearHead& head);

struct LinearGrads {
  Matrix weight;
  Vector bias;
  Matrix input;
};

// x is the forward input (the whole cache of a linear layer).
LinearGrads linear_backward(const Matrix& upstream, const Matrix& x, const LinearHead& head);

// ---------------------------------------------------------------------------
// Single-layer unidirectional LSTM, zero initial state.
//
// Gate rows are stacked [input; forget; cell; output], each H high, and act
// on the concatenation z_t = [x_t, h_{t-1}].
// ---------------------------------------------------------------------------

struct LstmLayer {
  Matrix weight;  // [4H, n_in + H]
  Vector bias;    // [4H]

  int hidden_size() const { return static_cast<int>(weight.rows() / 4); }
  int input_size() const { return static_cast<int>(weight.cols()) - hidden_size(); }
};

// Uniform(-1/sqrt(H), 1/sqrt(H)); forget-gate bias set to 1.
LstmLayer init_lstm(int input_size, int hidden_size, Rng& rng);

struct LstmCache {
  Matrix z;      // [T, n_in + H]
  Matrix gates;  // [T, 4H] post-activation
  Matrix cells;  // [T, H]
  Matrix cell_tanh;
};

// x: [T, n_in] -> hidden states [T, H].
Matrix lstm_forward(const Matrix& x, const LstmLayer& layer, LstmCache* cache = nullptr);

struct LstmGrads {
  Matrix weight;
  Vector bias;
  Matrix input;  // [T, n_in]
};

LstmGrads lstm_backward(const Matrix& upstream, const LstmCache& cache, const LstmLayer& layer);

}  // namespace tfront
