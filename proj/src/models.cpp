// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "tfront/models.hpp"

namespace tfront {
namespace {

void fill_uniform(Matrix& m, double bound, Rng& rng) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-bound, bound);
  }
}

void fill_uniform(Vector& v, double bound, Rng& rng) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.uniform(-bound, bound);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

LinearHead init_linear(int out_dim, int in_dim, Rng& rng) {
  if (out_dim < 1 || in_dim < 1) throw ArgumentError("linear head dimensions must be positive");
  LinearHead head;
  head.weight.resize(out_dim, in_dim);
  head.bias.resize(out_dim);
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
  fill_uniform(head.weight, bound, rng);
  fill_uniform(head.bias, bound, rng);
  return head;
}

Matrix linear_forward(const Matrix& x, const LinearHead& head) {
  if (x.cols() != head.in_dim()) {
    throw ContractViolation("linear_forward: input has " + std::to_string(x.cols()) + " columns, head expects " +
                            std::to_string(head.in_dim()));
  }
  Matrix out = x * head.weight.transpose();
  out.rowwise() += head.bias.transpose();
  return out;
}

LinearGrads linear_backward(const Matrix& upstream, const Matrix& x, const LinearHead& head) {
  require_shape(upstream, x.rows(), head.out_dim(), "linear_backward upstream");
  require_shape(x, upstream.rows(), head.in_dim(), "linear_backward input");
  LinearGrads g;
  g.weight.noalias() = upstream.transpose() * x;
  g.bias = upstream.colwise().sum().transpose();
  g.input.noalias() = upstream * head.weight;
  return g;
}

LstmLayer init_lstm(int input_size, int hidden_size, Rng& rng) {
  if (input_size < 1 || hidden_size < 1) throw ArgumentError("lstm sizes must be positive");
  LstmLayer layer;
  layer.weight.resize(4 * hidden_size, input_size + hidden_size);
  layer.bias.resize(4 * hidden_size);
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_size));
  fill_uniform(layer.weight, bound, rng);
  fill_uniform(layer.bias, bound, rng);
  layer.bias.segment(hidden_size, hidden_size).setOnes();
  return layer;
}

Matrix lstm_forward(const Matrix& x, const LstmLayer& layer, LstmCache* cache) {
  const int h = layer.hidden_size();
  const int n_in = layer.input_size();
  if (x.cols() != n_in) {
    throw ContractViolation("lstm_forward: input has " + std::to_string(x.cols()) + " features, layer expects " +
                            std::to_string(n_in));
  }
  const Eigen::Index steps = x.rows();
  Matrix hidden(steps, h);
  Matrix z(steps, n_in + h);
  Matrix gates(steps, 4 * h);
  Matrix cells(steps, h);
  Matrix cell_tanh(steps, h);

  // The input projection does not depend on the recurrence; do it at once.
  const Matrix x_proj = x * layer.weight.leftCols(n_in).transpose();
  const auto w_rec = layer.weight.rightCols(h);

  Vector h_prev = Vector::Zero(h);
  Vector c_prev = Vector::Zero(h);
  Vector pre(4 * h);
  for (Eigen::Index t = 0; t < steps; ++t) {
    z.row(t).head(n_in) = x.row(t);
    z.row(t).tail(h) = h_prev.transpose();
    pre.noalias() = x_proj.row(t).transpose() + layer.bias;
    pre.noalias() += w_rec * h_prev;
    for (int k = 0; k < h; ++k) {
      const double i = sigmoid(pre(k));
      const double f = sigmoid(pre(h + k));
      const double g = std::tanh(pre(2 * h + k));
      const double o = sigmoid(pre(3 * h + k));
      const double c = f * c_prev(k) + i * g;
      const double tc = std::tanh(c);
      gates(t, k) = i;
      gates(t, h + k) = f;
      gates(t, 2 * h + k) = g;
      gates(t, 3 * h + k) = o;
      cells(t, k) = c;
      cell_tanh(t, k) = tc;
      hidden(t, k) = o * tc;
    }
    h_prev = hidden.row(t).transpose();
    c_prev = cells.row(t).transpose();
  }
  if (cache) {
    cache->z = std::move(z);
    cache->gates = std::move(gates);
    cache->cells = std::move(cells);
    cache->cell_tanh = std::move(cell_tanh);
  }
  return hidden;
}

LstmGrads lstm_backward(const Matrix& upstream, const LstmCache& cache, const LstmLayer& layer) {
  const int h = layer.hidden_size();
  const int n_in = layer.input_size();
  const Eigen::Index steps = cache.gates.rows();
  require_shape(upstream, steps, h, "lstm_backward upstream");
  require_shape(cache.z, steps, n_in + h, "lstm_backward cache");

  Matrix d_pre(steps, 4 * h);
  Vector dh_next = Vector::Zero(h);  // gradient flowing into h_t from step t+1
  Vector dc_next = Vector::Zero(h);
  const auto w_rec = layer.weight.rightCols(h);
  for (Eigen::Index t = steps - 1; t >= 0; --t) {
    for (int k = 0; k < h; ++k) {
      const double i = cache.gates(t, k);
      const double f = cache.gates(t, h + k);
      const double g = cache.gates(t, 2 * h + k);
      const double o = cache.gates(t, 3 * h + k);
      const double tc = cache.cell_tanh(t, k);
      const double c_prev = t > 0 ? cache.cells(t - 1, k) : 0.0;
      const double dh = upstream(t, k) + dh_next(k);
      const double dc = dc_next(k) + dh * o * (1.0 - tc * tc);
      d_pre(t, k) = dc * g * i * (1.0 - i);
      d_pre(t, h + k) = dc * c_prev * f * (1.0 - f);
      d_pre(t, 2 * h + k) = dc * i * (1.0 - g * g);
      d_pre(t, 3 * h + k) = dh * tc * o * (1.0 - o);
      dc_next(k) = dc * f;
    }
    dh_next.noalias() = w_rec.transpose() * d_pre.row(t).transpose();
  }

  LstmGrads g;
  g.weight.noalias() = d_pre.transpose() * cache.z;
  g.bias = d_pre.colwise().sum().transpose();
  g.input.noalias() = d_pre * layer.weight.leftCols(n_in);
  return g;
}

}  // namespace tfront
