// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfront/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tfront/losses.hpp"
#include "tfront/pipeline.hpp"

namespace tfront {
namespace {

template <typename M>
std::span<double> span_of(M& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

template <typename M>
std::span<const double> cspan_of(const M& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(lo, hi);
  return m;
}

std::vector<double> random_signal(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  return x;
}

// Scalar probe: sum(U .* Y) for a fixed random U, whose gradient is U.
double probe(const Matrix& y, const Matrix& u) { return (y.array() * u.array()).sum(); }

void stft_suites(std::uint64_t seed, const GradcheckOptions& opt, std::vector<GradcheckResult>& out) {
  // Small transform: every kernel coordinate and every input sample.
  {
    Rng rng(mix_seed(seed, 11));
    StftKernelBank bank = init_stft_kernels(32, 8);
    bank.real += 0.1 * random_matrix(bank.real.rows(), bank.real.cols(), rng);
    bank.imag += 0.1 * random_matrix(bank.imag.rows(), bank.imag.cols(), rng);
    std::vector<double> x = random_signal(100, rng);
    StftCache cache;
    const Spectrogram s = stft_forward(x, bank, &cache);
    const Matrix u = random_matrix(s.frames.rows(), s.frames.cols(), rng);
    const StftGrads g = stft_backward(u, cache, bank, true);
    auto loss = [&] { return probe(stft_forward(x, bank).frames, u); };
    std::vector<std::size_t> all(static_cast<std::size_t>(bank.real.size()));
    std::iota(all.begin(), all.end(), 0);
    out.push_back(check_gradient("stft.real (n_fft 32)", loss, span_of(bank.real), cspan_of(g.real), all, opt));
    out.push_back(check_gradient("stft.imag (n_fft 32)", loss, span_of(bank.imag), cspan_of(g.imag), all, opt));
    std::vector<std::size_t> xs(x.size());
    std::iota(xs.begin(), xs.end(), 0);
    out.push_back(check_gradient("stft.input (n_fft 32)", loss, x, g.input, xs, opt));
  }
  // Production geometry, sampled coordinates.
  {
    Rng rng(mix_seed(seed, 12));
    StftKernelBank bank = init_stft_kernels();
    std::vector<double> x = random_signal(800, rng);
    StftCache cache;
    const Spectrogram s = stft_forward(x, bank, &cache);
    const Matrix u = random_matrix(s.frames.rows(), s.frames.cols(), rng);
    const StftGrads g = stft_backward(u, cache, bank, false);
    auto loss = [&] { return probe(stft_forward(x, bank).frames, u); };
    const auto coords = sample_coords(static_cast<std::size_t>(bank.real.size()), 400, rng);
    // Rows 0 and 240 of the imaginary kernels are exactly zero, so the
    // magnitude there is sqrt(re^2 + eps) and still smooth.
    out.push_back(check_gradient("stft.real (n_fft 480)", loss, span_of(bank.real), cspan_of(g.real), coords, opt));
    out.push_back(check_gradient("stft.imag (n_fft 480)", loss, span_of(bank.imag), cspan_of(g.imag), coords, opt));
  }
}

void mel_suites(std::uint64_t seed, const GradcheckOptions& opt, std::vector<GradcheckResult>& out) {
  Rng rng(mix_seed(seed, 21));
  Spectrogram mag;
  mag.frames = random_matrix(6, kStftBins, rng, 0.0, 3.0);
  {
    MelFilterBank bank = init_mel_freeform(40);
    const Matrix u = random_matrix(6, 40, rng);
    const MelGrads g = mel_backward(u, mag, bank, true);
    auto loss = [&] { return probe(mel_forward(mag, bank).frames, u); };
    const auto coords = sample_coords(static_cast<std::size_t>(bank.weights.size()), 600, rng);
    out.push_back(check_gradient("mel.weights (freeform)", loss, span_of(bank.weights), cspan_of(g.weights), coords, opt));
    const auto in_coords = sample_coords(static_cast<std::size_t>(mag.frames.size()), 300, rng);
    out.push_back(
        check_gradient("mel.input (freeform)", loss, span_of(mag.frames), cspan_of(g.input), in_coords, opt));
  }
  {
    MelFilterBank bank = init_mel_constrained(40);
    // Move off the initial grid so no STFT bin sits within a step of an
    // apex or a foot, where the triangle is not differentiable.
    for (auto& c : bank.centers_mel) c += rng.uniform(-7.0, 7.0);
    for (auto& r : bank.raw_widths) r += rng.uniform(-0.05, 0.05);
    bank.rematerialize();
    const Matrix u = random_matrix(6, 40, rng);
    const MelGrads g = mel_backward(u, mag, bank, false);
    auto loss = [&] {
      bank.rematerialize();
      return probe(mel_forward(mag, bank).frames, u);
    };
    std::vector<std::size_t> all(bank.centers_mel.size());
    std::iota(all.begin(), all.end(), 0);
    out.push_back(check_gradient("mel.centers (constrained)", loss, bank.centers_mel, g.centers_mel, all, opt));
    out.push_back(check_gradient("mel.widths (constrained)", loss, bank.raw_widths, g.raw_widths, all, opt));
    bank.rematerialize();
  }
}

void model_suites(std::uint64_t seed, const GradcheckOptions& opt, std::vector<GradcheckResult>& out) {
  {
    Rng rng(mix_seed(seed, 31));
    LinearHead head = init_linear(5, 20, rng);
    Matrix x = random_matrix(3, 20, rng);
    const Matrix u = random_matrix(3, 5, rng);
    const LinearGrads g = linear_backward(u, x, head);
    auto loss = [&] { return probe(linear_forward(x, head), u); };
    std::vector<std::size_t> w(static_cast<std::size_t>(head.weight.size()));
    std::iota(w.begin(), w.end(), 0);
    std::vector<std::size_t> b(static_cast<std::size_t>(head.bias.size()));
    std::iota(b.begin(), b.end(), 0);
    std::vector<std::size_t> xi(static_cast<std::size_t>(x.size()));
    std::iota(xi.begin(), xi.end(), 0);
    out.push_back(check_gradient("linear.weight", loss, span_of(head.weight), cspan_of(g.weight), w, opt));
    out.push_back(check_gradient("linear.bias", loss, span_of(head.bias), cspan_of(g.bias), b, opt));
    out.push_back(check_gradient("linear.input", loss, span_of(x), cspan_of(g.input), xi, opt));
  }
  for (int t : {1, 2, 4, 7}) {
    Rng rng(mix_seed(seed, 32, static_cast<std::uint64_t>(t)));
    LstmLayer layer = init_lstm(5, 4, rng);
    layer.weight *= 3.0;  // livelier gates than the default init
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias[i] += rng.uniform(-0.5, 0.5);
    Matrix x = random_matrix(t, 5, rng);
    const Matrix u = random_matrix(t, 4, rng);
    LstmCache cache;
    lstm_forward(x, layer, &cache);
    const LstmGrads g = lstm_backward(u, cache, layer);
    auto loss = [&] { return probe(lstm_forward(x, layer), u); };
    std::vector<std::size_t> w(static_cast<std::size_t>(layer.weight.size()));
    std::iota(w.begin(), w.end(), 0);
    std::vector<std::size_t> b(static_cast<std::size_t>(layer.bias.size()));
    std::iota(b.begin(), b.end(), 0);
    std::vector<std::size_t> xi(static_cast<std::size_t>(x.size()));
    std::iota(xi.begin(), xi.end(), 0);
    const std::string tag = " (T=" + std::to_string(t) + ")";
    out.push_back(check_gradient("lstm.weight" + tag, loss, span_of(layer.weight), cspan_of(g.weight), w, opt));
    out.push_back(check_gradient("lstm.bias" + tag, loss, span_of(layer.bias), cspan_of(g.bias), b, opt));
    out.push_back(check_gradient("lstm.input" + tag, loss, span_of(x), cspan_of(g.input), xi, opt));
  }
}

void loss_suites(std::uint64_t seed, const GradcheckOptions& opt, std::vector<GradcheckResult>& out) {
  {
    Rng rng(mix_seed(seed, 41));
    Vector logits = random_matrix(12, 1, rng, -3.0, 3.0);
    const int label = static_cast<int>(rng.below(12));
    const XentResult r = softmax_xent(logits, label);
    auto loss = [&] { return softmax_xent(logits, label).loss; };
    std::vector<std::size_t> all(12);
    std::iota(all.begin(), all.end(), 0);
    out.push_back(check_gradient("softmax_xent", loss, span_of(logits), cspan_of(r.grad), all, opt));
  }
  {
    Rng rng(mix_seed(seed, 42));
    const int T = 8, C = 5;
    Matrix logits = random_matrix(T, C, rng, -2.0, 2.0);
    const std::vector<int> target{1, 3, 3};
    const int blank = C - 1;
    // Through log-softmax, as in training.
    Matrix lp = log_softmax_rows(logits);
    const CtcResult r = ctc_loss(lp, target, blank);
    const Matrix d_logits = log_softmax_backward(r.grad, lp);
    auto loss = [&] { return ctc_loss(log_softmax_rows(logits), target, blank).loss; };
    std::vector<std::size_t> all(static_cast<std::size_t>(logits.size()));
    std::iota(all.begin(), all.end(), 0);
    out.push_back(check_gradient("ctc (logits)", loss, span_of(logits), cspan_of(d_logits), all, opt));
    // Directly on the log-probabilities.
    auto direct = [&] { return ctc_loss(lp, target, blank).loss; };
    out.push_back(check_gradient("ctc (log_probs)", direct, span_of(lp), cspan_of(r.grad), all, opt));
  }
}

void check_views(const std::string& prefix, const std::function<double()>& loss, ModelParams& params,
                 const ModelGrads& grads, Rng& rng, std::size_t per_tensor, const GradcheckOptions& opt,
                 std::vector<GradcheckResult>& out) {
  const auto gviews = grad_views(grads);
  for (auto& pv : param_views(params)) {
    const auto it = std::find_if(gviews.begin(), gviews.end(), [&](const GradView& g) { return g.name == pv.name; });
    if (it == gviews.end()) continue;
    const auto coords = sample_coords(pv.values.size(), per_tensor, rng);
    out.push_back(check_gradient(prefix + pv.name, loss, pv.values, it->values, coords, opt));
  }
}

// Several stacked stages leave round-off near 1e-12 of the loss, so
// coordinates far below a tensor's largest gradient are judged against 1e-3
// of that maximum instead.
void pipeline_suites(std::uint64_t seed, GradcheckOptions opt, std::vector<GradcheckResult>& out) {
  opt.floor_fraction = std::max(opt.floor_fraction, 1e-3);
  const GradRequest all{true, true};
  {
    Rng rng(mix_seed(seed, 51));
    ModelParams p;
    p.task = Task::Kws;
    p.stft = init_stft_kernels();
    p.mel = init_mel_freeform(4);
    p.head = init_linear(kKwsClasses, stft_frame_count(kKwsClipSamples, kHop) * 4, rng);
    p.head.weight *= 0.05;
    std::vector<double> x = random_signal(kKwsClipSamples, rng);
    for (double& v : x) v *= 0.1;
    const MaskSpec mask = parse_mask("216-240");
    ExampleInput in;
    in.samples = x;
    ModelGrads g;
    kws_loss(p, in, 3, mask, all, &g);
    auto loss = [&] { return kws_loss(p, in, 3, mask, {}, nullptr); };
    check_views("kws pipeline: ", loss, p, g, rng, 40, opt, out);
  }
  for (MelStyle style : {MelStyle::FreeForm, MelStyle::ShapeConstrained}) {
    Rng rng(mix_seed(seed, 52, static_cast<std::uint64_t>(style)));
    ModelParams p;
    p.task = Task::Asr;
    p.stft = init_stft_kernels();
    p.mel = style == MelStyle::FreeForm ? init_mel_freeform(8) : init_mel_constrained(8);
    if (style == MelStyle::ShapeConstrained) {
      for (auto& c : p.mel.centers_mel) c += rng.uniform(-7.0, 7.0);
      p.mel.rematerialize();
    }
    p.lstm = init_lstm(8, 6, rng);
    p.head = init_linear(kAsrClasses, 6, rng);
    std::vector<double> x = random_signal(1600, rng);
    for (double& v : x) v *= 0.05;
    const std::vector<int> target{4, 17, 4};
    ExampleInput in;
    in.samples = x;
    ModelGrads g;
    asr_loss(p, in, target, {}, all, &g);
    auto loss = [&] {
      if (p.mel.style == MelStyle::ShapeConstrained) p.mel.rematerialize();
      return asr_loss(p, in, target, {}, {}, nullptr);
    };
    check_views("asr pipeline (" + std::string(mel_style_name(style)) + "): ", loss, p, g, rng, 40, opt, out);
  }
}

}  // namespace

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  if (denom == 0.0) return 0.0;
  return std::abs(analytic - numeric) / denom;
}

GradcheckResult check_gradient(std::string suite, const std::function<double()>& loss, std::span<double> param,
                               std::span<const double> analytic, std::span<const std::size_t> coords,
                               const GradcheckOptions& options) {
  if (param.size() != analytic.size()) throw ContractViolation("gradcheck: " + suite + " size mismatch");
  GradcheckResult r;
  r.suite = std::move(suite);
  r.tolerance = options.tolerance;
  double scale = 0.0;
  for (double a : analytic) scale = std::max(scale, std::abs(a));
  const double floor = options.floor_fraction * scale;
  for (std::size_t i : coords) {
    const double saved = param[i];
    param[i] = saved + options.step;
    const double up = loss();
    param[i] = saved - options.step;
    const double down = loss();
    param[i] = saved;
    const double numeric = (up - down) / (2.0 * options.step);
    r.max_rel_error = std::max(r.max_rel_error, relative_error(analytic[i], numeric, floor));
    ++r.checked;
  }
  return r;
}

std::vector<std::size_t> sample_coords(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (k >= n) return idx;
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<GradcheckResult> run_gradcheck_suites(std::uint64_t seed, const GradcheckOptions& options) {
  std::vector<GradcheckResult> out;
  stft_suites(seed, options, out);
  mel_suites(seed, options, out);
  model_suites(seed, options, out);
  loss_suites(seed, options, out);
  pipeline_suites(seed, options, out);
  return out;
}

}  // namespace tfront
