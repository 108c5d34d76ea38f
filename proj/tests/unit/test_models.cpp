// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "tfront/losses.hpp"
#include "tfront/models.hpp"

using namespace tfront;
using testing::random_matrix;

namespace {

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Scalar LSTM recurrence with gates [i, f, g, o] over z = [x, h].
std::vector<std::vector<double>> scalar_lstm(const Matrix& x, const LstmLayer& l) {
  const int H = l.hidden_size();
  const int n_in = l.input_size();
  std::vector<double> h(static_cast<std::size_t>(H), 0.0), c(static_cast<std::size_t>(H), 0.0);
  std::vector<std::vector<double>> out;
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    std::vector<double> z;
    for (int i = 0; i < n_in; ++i) z.push_back(x(t, i));
    for (int i = 0; i < H; ++i) z.push_back(h[static_cast<std::size_t>(i)]);
    std::vector<double> pre(4 * static_cast<std::size_t>(H));
    for (int r = 0; r < 4 * H; ++r) {
      double acc = l.bias(r);
      for (std::size_t q = 0; q < z.size(); ++q) acc += l.weight(r, static_cast<Eigen::Index>(q)) * z[q];
      pre[static_cast<std::size_t>(r)] = acc;
    }
    for (std::size_t u = 0; u < static_cast<std::size_t>(H); ++u) {
      const double ig = sig(pre[u]);
      const double fg = sig(pre[H + u]);
      const double gg = std::tanh(pre[2 * H + u]);
      const double og = sig(pre[3 * H + u]);
      c[u] = fg * c[u] + ig * gg;
      h[u] = og * std::tanh(c[u]);
    }
    out.push_back(h);
  }
  return out;
}

LstmLayer random_lstm(int n_in, int H, Rng& rng, double scale = 1.0) {
  LstmLayer l = init_lstm(n_in, H, rng);
  l.weight *= scale;
  for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) += rng.uniform(-0.5, 0.5);
  return l;
}

}  // namespace

TEST_CASE("linear forward: zeros, unit input, loop oracle") {
  Rng rng(1);
  LinearHead head = init_linear(4, 6, rng);
  for (Eigen::Index i = 0; i < head.weight.size(); ++i) {
    CHECK(std::abs(head.weight.data()[i]) <= 1.0 / std::sqrt(6.0));
  }
  LinearHead zero{Matrix::Zero(4, 6), Vector::Zero(4)};
  CHECK(linear_forward(random_matrix(3, 6, rng), zero).isZero(0.0));

  Matrix e1 = Matrix::Zero(1, 6);
  e1(0, 1) = 1.0;
  LinearHead nobias{head.weight, Vector::Zero(4)};
  const Matrix col = linear_forward(e1, nobias);
  for (int c = 0; c < 4; ++c) CHECK(col(0, c) == head.weight(c, 1));

  const Matrix x = random_matrix(5, 6, rng);
  const Matrix y = linear_forward(x, head);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 4; ++c) {
      double acc = head.bias(c);
      for (int d = 0; d < 6; ++d) acc += x(r, d) * head.weight(c, d);
      CHECK(std::abs(y(r, c) - acc) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(linear_forward(random_matrix(2, 5, rng), head), ContractViolation);
  CHECK_THROWS_AS(init_linear(0, 3, rng), ArgumentError);
}

TEST_CASE("linear backward") {
  Rng rng(2);
  LinearHead head = init_linear(3, 7, rng);
  Matrix x = random_matrix(4, 7, rng);
  const Matrix up = random_matrix(4, 3, rng);
  const auto z = linear_backward(Matrix::Zero(4, 3), x, head);
  CHECK(z.weight.isZero(0.0));
  CHECK(z.bias.isZero(0.0));
  CHECK(z.input.isZero(0.0));
  const auto g = linear_backward(up, x, head);
  for (int c = 0; c < 3; ++c) CHECK(g.bias(c) == doctest::Approx(up.col(c).sum()).epsilon(1e-15));
  const auto loss = [&] { return (linear_forward(x, head).array() * up.array()).sum(); };
  double worst = 0.0;
  for (Eigen::Index i = 0; i < head.weight.size(); ++i) {
    worst = std::max(worst, testing::rel_err(g.weight.data()[i], testing::numeric_partial(loss, head.weight.data()[i])));
  }
  for (Eigen::Index i = 0; i < head.bias.size(); ++i) {
    worst = std::max(worst, testing::rel_err(g.bias(i), testing::numeric_partial(loss, head.bias(i))));
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    worst = std::max(worst, testing::rel_err(g.input.data()[i], testing::numeric_partial(loss, x.data()[i])));
  }
  CHECK(worst < 1e-4);
  CHECK_THROWS_AS(linear_backward(Matrix::Zero(3, 3), x, head), ContractViolation);
}

TEST_CASE("lstm: zero input and zero weights give zero states") {
  LstmLayer l{Matrix::Zero(8, 5), Vector::Zero(8)};
  CHECK(l.hidden_size() == 2);
  CHECK(l.input_size() == 3);
  CHECK(lstm_forward(Matrix::Zero(4, 3), l).isZero(0.0));
}

TEST_CASE("lstm init") {
  Rng rng(3);
  const auto l = init_lstm(5, 4, rng);
  CHECK(l.weight.rows() == 16);
  CHECK(l.weight.cols() == 9);
  for (int u = 0; u < 4; ++u) CHECK(l.bias(4 + u) == 1.0);
  CHECK(l.weight.cwiseAbs().maxCoeff() <= 0.5);
}

TEST_CASE("lstm forward matches the scalar recurrence") {
  Rng rng(4);
  for (int T : {1, 3, 6}) {
    const LstmLayer l = random_lstm(3, 2, rng, 2.0);
    const Matrix x = random_matrix(T, 3, rng, -2.0, 2.0);
    const Matrix h = lstm_forward(x, l);
    const auto ref = scalar_lstm(x, l);
    for (int t = 0; t < T; ++t) {
      for (int u = 0; u < 2; ++u) CHECK(std::abs(h(t, u) - ref[static_cast<std::size_t>(t)][static_cast<std::size_t>(u)]) <= 1e-12);
    }
  }
  LstmCache cache;
  const LstmLayer l = random_lstm(3, 2, rng);
  const Matrix x = random_matrix(3, 3, rng);
  const Matrix h = lstm_forward(x, l, &cache);
  CHECK(h == lstm_forward(x, l));
  CHECK(cache.gates.rows() == 3);
  CHECK(cache.gates.cols() == 8);
  // sigmoid gates in (0,1), candidate in (-1,1)
  for (int t = 0; t < 3; ++t) {
    for (int r = 0; r < 8; ++r) {
      const double v = cache.gates(t, r);
      if (r >= 4 && r < 6) {
        CHECK((v > -1.0 && v < 1.0));
      } else {
        CHECK((v > 0.0 && v < 1.0));
      }
    }
  }
  CHECK_THROWS_AS(lstm_forward(Matrix::Zero(2, 4), l), ContractViolation);
}

TEST_CASE("lstm backward matches finite differences") {
  Rng rng(5);
  for (int T : {1, 2, 4, 7}) {
    LstmLayer l = random_lstm(4, 3, rng, 3.0);
    Matrix x = random_matrix(T, 4, rng);
    const Matrix up = random_matrix(T, 3, rng);
    const auto loss = [&] { return (lstm_forward(x, l).array() * up.array()).sum(); };
    LstmCache cache;
    lstm_forward(x, l, &cache);
    const auto g = lstm_backward(up, cache, l);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < l.weight.size(); ++i) {
      worst = std::max(worst, testing::rel_err(g.weight.data()[i], testing::numeric_partial(loss, l.weight.data()[i])));
    }
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) {
      worst = std::max(worst, testing::rel_err(g.bias(i), testing::numeric_partial(loss, l.bias(i))));
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      worst = std::max(worst, testing::rel_err(g.input.data()[i], testing::numeric_partial(loss, x.data()[i])));
    }
    CHECK_MESSAGE(worst < 1e-4, "T=" << T);
  }
}

TEST_CASE("lstm backward: zero upstream and shape checks") {
  Rng rng(6);
  const LstmLayer l = random_lstm(2, 3, rng);
  LstmCache cache;
  lstm_forward(random_matrix(4, 2, rng), l, &cache);
  const auto g = lstm_backward(Matrix::Zero(4, 3), cache, l);
  CHECK(g.weight.isZero(0.0));
  CHECK(g.bias.isZero(0.0));
  CHECK(g.input.isZero(0.0));
  CHECK_THROWS_AS(lstm_backward(Matrix::Zero(3, 3), cache, l), ContractViolation);
}

TEST_CASE("lstm single step equals one cell by hand") {
  Rng rng(7);
  const LstmLayer l = random_lstm(2, 1, rng);
  Matrix x(1, 2);
  x << 0.3, -0.7;
  const double pre_i = l.bias(0) + l.weight(0, 0) * 0.3 + l.weight(0, 1) * -0.7;
  const double pre_g = l.bias(2) + l.weight(2, 0) * 0.3 + l.weight(2, 1) * -0.7;
  const double pre_o = l.bias(3) + l.weight(3, 0) * 0.3 + l.weight(3, 1) * -0.7;
  const double expected = sig(pre_o) * std::tanh(sig(pre_i) * std::tanh(pre_g));
  CHECK(lstm_forward(x, l)(0, 0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("softmax rows sum to one and ignore constant shifts") {
  Rng rng(8);
  const Matrix logits = random_matrix(6, 62, rng, -20.0, 20.0);
  const Matrix p = softmax_rows(logits);
  Matrix shifted = logits;
  shifted.array() += 123.5;
  const Matrix q = softmax_rows(shifted);
  for (int r = 0; r < 6; ++r) {
    CHECK(std::abs(p.row(r).sum() - 1.0) <= 1e-12);
    Eigen::Index a = 0, b = 0;
    p.row(r).maxCoeff(&a);
    q.row(r).maxCoeff(&b);
    CHECK(a == b);
    CHECK((p.row(r) - q.row(r)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK(p.minCoeff() >= 0.0);
  CHECK(p.maxCoeff() <= 1.0);
  const Matrix lp = log_softmax_rows(logits);
  CHECK((lp.array().exp().matrix() - p).cwiseAbs().maxCoeff() <= 1e-12);
}
