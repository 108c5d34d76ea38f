// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "tfront/bank_io.hpp"
#include "tfront/frontend.hpp"
#include "tfront/models.hpp"
#include "tfront/optim.hpp"
#include "tfront/signal_io.hpp"

namespace tfront {

// Front-end plus classifier. KWS: flattened Mel spectrogram -> linear head.
// ASR: Mel spectrogram -> LSTM -> per-frame linear head.
struct ModelParams {
  Task task = Task::Kws;
  StftKernelBank stft;
  MelFilterBank mel;
  std::optional<LstmLayer> lstm;
  LinearHead head;
};

// Gradients mirroring ModelParams. Members are left empty when the
// corresponding stage was not differentiated.
struct ModelGrads {
  Matrix stft_real;
  Matrix stft_imag;
  Matrix mel_weights;
  std::vector<double> mel_centers;
  std::vector<double> mel_raw_widths;
  Matrix lstm_weight;
  Vector lstm_bias;
  Matrix head_weight;
  Vector head_bias;

  // this += other; empty members adopt the other's value.
  void accumulate(const ModelGrads& other);
  void scale(double factor);
};

// Which front-end stages need parameter gradients.
struct GradRequest {
  bool stft = false;
  bool mel = false;
};

// Per-clip input. The cached spectrograms (already masked) are used when
// present so frozen stages are evaluated once per dataset.
struct ExampleInput {
  std::span<const double> samples;
  const Spectrogram* magnitude = nullptr;
  const Spectrogram* features = nullptr;
};

Spectrogram masked_magnitude(const ModelParams& params, std::span<const double> samples, const MaskSpec& mask);
Spectrogram mel_features(const ModelParams& params, const ExampleInput& in, const MaskSpec& mask);

// Forward only.
Vector kws_logits(const ModelParams& params, const ExampleInput& in, const MaskSpec& mask);
Matrix asr_log_probs(const ModelParams& params, const ExampleInput& in, const MaskSpec& mask);

// Loss of one example and, when `grads` is non-null, its gradients.
double kws_loss(const ModelParams& params, const ExampleInput& in, int label, const MaskSpec& mask,
                GradRequest request, ModelGrads* grads);
double asr_loss(const ModelParams& params, const ExampleInput& in, std::span<const int> target,
                const MaskSpec& mask, GradRequest request, ModelGrads* grads);

// Named tensors for the optimizer.
std::vector<ParamView> param_views(ModelParams& params);
std::vector<GradView> grad_views(const ModelGrads& grads);

// Serialization through the bank file format.
std::vector<NamedMatrix> params_to_blocks(const ModelParams& params);
ModelParams params_from_blocks(const std::vector<NamedMatrix>& blocks);
void save_params(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_params(const std::filesystem::path& path);

}  // namespace tfront
