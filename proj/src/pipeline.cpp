// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfront/pipeline.hpp"

#include "tfront/losses.hpp"

namespace tfront {
namespace {

void add_into(Matrix& dst, const Matrix& src) {
  if (src.size() == 0) return;
  if (dst.size() == 0) {
    dst = src;
  } else {
    dst += src;
  }
}

void add_into(Vector& dst, const Vector& src) {
  if (src.size() == 0) return;
  if (dst.size() == 0) {
    dst = src;
  } else {
    dst += src;
  }
}

void add_into(std::vector<double>& dst, const std::vector<double>& src) {
  if (src.empty()) return;
  if (dst.empty()) {
    dst = src;
    return;
  }
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

Matrix row_of(const std::vector<double>& v) {
  Matrix m(1, static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m(0, static_cast<Eigen::Index>(i)) = v[i];
  return m;
}

std::vector<double> vec_of(const Matrix& m) { return {m.data(), m.data() + m.size()}; }

Matrix row_of(const Vector& v) { return v.transpose(); }

// Magnitude and Mel stages shared by both tasks. `cache` is filled when the
// STFT has to be differentiated.
struct FrontendPass {
  Spectrogram magnitude;
  Spectrogram features;
  StftCache cache;
};

FrontendPass run_frontend(const ModelParams& params, const ExampleInput& in, const MaskSpec& mask,
                          GradRequest request) {
  FrontendPass pass;
  const bool need_magnitude = request.mel || request.stft || !in.features;
  if (!need_magnitude) {
    pass.features = *in.features;
    return pass;
  }
  if (in.magnitude && !request.stft) {
    pass.magnitude = *in.magnitude;
  } else {
    pass.magnitude = stft_forward(in.samples, params.stft, request.stft ? &pass.cache : nullptr);
    apply_mask_inplace(pass.magnitude.frames, mask);
  }
  pass.features = mel_forward(pass.magnitude, params.mel);
  return pass;
}

void frontend_backward(const ModelParams& params, const FrontendPass& pass, const Matrix& d_features,
                       const MaskSpec& mask, GradRequest request, ModelGrads& grads) {
  if (!request.mel && !request.stft) return;
  MelGrads mg = mel_backward(d_features, pass.magnitude, params.mel, request.stft);
  if (request.mel) {
    if (params.mel.style == MelStyle::FreeForm) {
      grads.mel_weights = std::move(mg.weights);
    } else {
      grads.mel_centers = std::move(mg.centers_mel);
      grads.mel_raw_widths = std::move(mg.raw_widths);
    }
  }
  if (request.stft) {
    apply_mask_inplace(mg.input, mask);
    StftGrads sg = stft_backward(mg.input, pass.cache, params.stft);
    grads.stft_real = std::move(sg.real);
    grads.stft_imag = std::move(sg.imag);
  }
}

}  // namespace

void ModelGrads::accumulate(const ModelGrads& other) {
  add_into(stft_real, other.stft_real);
  add_into(stft_imag, other.stft_imag);
  add_into(mel_weights, other.mel_weights);
  add_into(mel_centers, other.mel_centers);
  add_into(mel_raw_widths, other.mel_raw_widths);
  add_into(lstm_weight, other.lstm_weight);
  add_into(lstm_bias, other.lstm_bias);
  add_into(head_weight, other.head_weight);
  add_into(head_bias, other.head_bias);
}

void ModelGrads::scale(double factor) {
  stft_real *= factor;
  stft_imag *= factor;
  mel_weights *= factor;
  for (double& v : mel_centers) v *= factor;
  for (double& v : mel_raw_widths) v *= factor;
  lstm_weight *= factor;
  lstm_bias *= factor;
  head_weight *= factor;
  head_bias *= factor;
}

Spectrogram masked_magnitude(const ModelParams& params, std::span<const double> samples, const MaskSpec& mask) {
  Spectrogram mag = stft_forward(samples, params.stft);
  apply_mask_inplace(mag.frames, mask);
  return mag;
}

Spectrogram mel_features(const ModelParams& params, const ExampleInput& in, const MaskSpec& mask) {
  return run_frontend(params, in, mask, {}).features;
}

Vector kws_logits(const ModelParams& params, const ExampleInput& in, const MaskSpec& mask) {
  const Spectrogram feats = mel_features(params, in, mask);
  const Eigen::Map<const Matrix> flat(feats.frames.data(), 1, feats.frames.size());
  return linear_forward(flat, params.head).row(0).transpose();
}

Matrix asr_log_probs(const ModelParams& params, const ExampleInput& in, const MaskSpec& mask) {
  if (!params.lstm) throw ContractViolation("asr_log_probs: model has no LSTM layer");
  const Spectrogram feats = mel_features(params, in, mask);
  return log_softmax_rows(linear_forward(lstm_forward(feats.frames, *params.lstm), params.head));
}

double kws_loss(const ModelParams& params, const ExampleInput& in, int label, const MaskSpec& mask,
                GradRequest request, ModelGrads* grads) {
  if (!grads) request = {};
  const FrontendPass pass = run_frontend(params, in, mask, request);
  const Matrix& feats = pass.features.frames;
  const Matrix flat = Eigen::Map<const Matrix>(feats.data(), 1, feats.size());
  const Vector logits = linear_forward(flat, params.head).row(0).transpose();
  const XentResult xent = softmax_xent(logits, label);
  if (!grads) return xent.loss;

  const LinearGrads lg = linear_backward(xent.grad.transpose(), flat, params.head);
  grads->head_weight = lg.weight;
  grads->head_bias = lg.bias;
  if (request.mel || request.stft) {
    const Matrix d_feats = Eigen::Map<const Matrix>(lg.input.data(), feats.rows(), feats.cols());
    frontend_backward(params, pass, d_feats, mask, request, *grads);
  }
  return xent.loss;
}

double asr_loss(const ModelParams& params, const ExampleInput& in, std::span<const int> target,
                const MaskSpec& mask, GradRequest request, ModelGrads* grads) {
  if (!params.lstm) throw ContractViolation("asr_loss: model has no LSTM layer");
  if (!grads) request = {};
  const FrontendPass pass = run_frontend(params, in, mask, request);
  LstmCache lstm_cache;
  const Matrix hidden = lstm_forward(pass.features.frames, *params.lstm, &lstm_cache);
  const Matrix log_probs = log_softmax_rows(linear_forward(hidden, params.head));
  const CtcResult ctc = ctc_loss(log_probs, target, kBlank);
  if (!grads) return ctc.loss;

  const Matrix d_logits = log_softmax_backward(ctc.grad, log_probs);
  const LinearGrads lg = linear_backward(d_logits, hidden, params.head);
  grads->head_weight = lg.weight;
  grads->head_bias = lg.bias;
  LstmGrads rg = lstm_backward(lg.input, lstm_cache, *params.lstm);
  grads->lstm_weight = std::move(rg.weight);
  grads->lstm_bias = std::move(rg.bias);
  frontend_backward(params, pass, rg.input, mask, request, *grads);
  return ctc.loss;
}

std::vector<ParamView> param_views(ModelParams& p) {
  const auto span_of = [](auto& m) { return std::span<double>(m.data(), static_cast<std::size_t>(m.size())); };
  std::vector<ParamView> views;
  views.push_back({"stft.real", ParamGroup::Stft, span_of(p.stft.real)});
  views.push_back({"stft.imag", ParamGroup::Stft, span_of(p.stft.imag)});
  if (p.mel.style == MelStyle::FreeForm) {
    views.push_back({"mel.weights", ParamGroup::Mel, span_of(p.mel.weights)});
  } else {
    views.push_back({"mel.centers", ParamGroup::Mel, std::span<double>(p.mel.centers_mel)});
    views.push_back({"mel.raw_widths", ParamGroup::Mel, std::span<double>(p.mel.raw_widths)});
  }
  if (p.lstm) {
    views.push_back({"lstm.weight", ParamGroup::Classifier, span_of(p.lstm->weight)});
    views.push_back({"lstm.bias", ParamGroup::Classifier, span_of(p.lstm->bias)});
  }
  views.push_back({"head.weight", ParamGroup::Classifier, span_of(p.head.weight)});
  views.push_back({"head.bias", ParamGroup::Classifier, span_of(p.head.bias)});
  return views;
}

std::vector<GradView> grad_views(const ModelGrads& g) {
  std::vector<GradView> views;
  const auto add = [&](const char* name, const double* data, std::size_t n) {
    if (n > 0) views.push_back({name, std::span<const double>(data, n)});
  };
  add("stft.real", g.stft_real.data(), static_cast<std::size_t>(g.stft_real.size()));
  add("stft.imag", g.stft_imag.data(), static_cast<std::size_t>(g.stft_imag.size()));
  add("mel.weights", g.mel_weights.data(), static_cast<std::size_t>(g.mel_weights.size()));
  add("mel.centers", g.mel_centers.data(), g.mel_centers.size());
  add("mel.raw_widths", g.mel_raw_widths.data(), g.mel_raw_widths.size());
  add("lstm.weight", g.lstm_weight.data(), static_cast<std::size_t>(g.lstm_weight.size()));
  add("lstm.bias", g.lstm_bias.data(), static_cast<std::size_t>(g.lstm_bias.size()));
  add("head.weight", g.head_weight.data(), static_cast<std::size_t>(g.head_weight.size()));
  add("head.bias", g.head_bias.data(), static_cast<std::size_t>(g.head_bias.size()));
  return views;
}

std::vector<NamedMatrix> params_to_blocks(const ModelParams& p) {
  std::vector<NamedMatrix> blocks;
  Matrix hop(1, 1);
  hop(0, 0) = p.stft.hop;
  blocks.push_back({"stft.hop", hop});
  blocks.push_back({"stft.window", row_of(p.stft.window)});
  blocks.push_back({"stft.real", p.stft.real});
  blocks.push_back({"stft.imag", p.stft.imag});
  Matrix range(1, 2);
  range << p.mel.fmin_hz, p.mel.fmax_hz;
  blocks.push_back({"mel.range", range});
  blocks.push_back({"mel.weights", p.mel.weights});
  if (p.mel.style == MelStyle::ShapeConstrained) {
    blocks.push_back({"mel.centers", row_of(p.mel.centers_mel)});
    blocks.push_back({"mel.raw_widths", row_of(p.mel.raw_widths)});
  }
  if (p.lstm) {
    blocks.push_back({"lstm.weight", p.lstm->weight});
    blocks.push_back({"lstm.bias", row_of(p.lstm->bias)});
  }
  blocks.push_back({"head.weight", p.head.weight});
  blocks.push_back({"head.bias", row_of(p.head.bias)});
  return blocks;
}

ModelParams params_from_blocks(const std::vector<NamedMatrix>& blocks) {
  ModelParams p;
  p.stft.real = find_block(blocks, "stft.real").values;
  p.stft.imag = find_block(blocks, "stft.imag").values;
  p.stft.window = vec_of(find_block(blocks, "stft.window").values);
  p.stft.hop = static_cast<int>(find_block(blocks, "stft.hop").values(0, 0));
  p.stft.n_fft = static_cast<int>(p.stft.real.cols());
  if (p.stft.imag.rows() != p.stft.real.rows() || p.stft.imag.cols() != p.stft.real.cols() ||
      static_cast<int>(p.stft.window.size()) != p.stft.n_fft) {
    throw FormatError("bank: inconsistent STFT blocks");
  }

  const Matrix& range = find_block(blocks, "mel.range").values;
  p.mel.fmin_hz = range(0, 0);
  p.mel.fmax_hz = range(0, 1);
  p.mel.weights = find_block(blocks, "mel.weights").values;
  p.mel.bin_mels = stft_bin_mels(static_cast<int>(p.mel.weights.cols()));
  if (const auto* centers = try_find_block(blocks, "mel.centers")) {
    p.mel.style = MelStyle::ShapeConstrained;
    p.mel.centers_mel = vec_of(centers->values);
    p.mel.raw_widths = vec_of(find_block(blocks, "mel.raw_widths").values);
    p.mel.rematerialize();
  }
  if (p.mel.weights.cols() != p.stft.real.rows()) throw FormatError("bank: Mel bank does not match STFT bins");

  if (const auto* w = try_find_block(blocks, "lstm.weight")) {
    LstmLayer layer;
    layer.weight = w->values;
    layer.bias = find_block(blocks, "lstm.bias").values.row(0).transpose();
    p.lstm = std::move(layer);
    p.task = Task::Asr;
  } else {
    p.task = Task::Kws;
  }
  p.head.weight = find_block(blocks, "head.weight").values;
  p.head.bias = find_block(blocks, "head.bias").values.row(0).transpose();
  return p;
}

void save_params(const ModelParams& params, const std::filesystem::path& path) {
  write_bank_file(path, params_to_blocks(params));
}

ModelParams load_params(const std::filesystem::path& path) { return params_from_blocks(read_bank_file(path)); }

}  // namespace tfront
