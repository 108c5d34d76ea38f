// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tfront/pipeline.hpp"

namespace tfront {

enum class MelInit { Triangular, Random };

struct TrainConfig {
  Task task = Task::Kws;
  TrainSetting setting = TrainSetting::A;
  MelStyle mel_style = MelStyle::FreeForm;
  MelInit mel_init = MelInit::Triangular;
  int n_mels = 40;
  MaskSpec mask;
  double lr = 1e-3;
  std::optional<double> lr_mel;
  std::optional<double> lr_stft;
  int epochs = 30;
  int batch_size = 20;
  std::uint64_t seed = 0;
  int hidden_size = 256;  // ASR LSTM width
  int workers = 0;        // 0: one per hardware thread
  std::filesystem::path ckpt_dir;  // per-epoch checkpoints when non-empty
};

void validate_config(const TrainConfig& config);

struct EpochReport {
  int epoch = 0;
  double train_loss = 0.0;
  double metric = 0.0;  // KWS accuracy % or ASR PER %
  double wall_seconds = 0.0;
};

// Deterministic 80/20 split keyed on a hash of each entry's source string.
struct DataSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> eval;
};

DataSplit split_dataset(const DatasetManifest& manifest);

// Draws a class uniformly, then a member of that class uniformly.
class WeightedSampler {
 public:
  // `labels[i]` is the class of pool item i; every class in [0, num_classes)
  // must occur at least once.
  WeightedSampler(std::vector<int> labels, int num_classes, std::uint64_t seed);

  std::size_t next();

 private:
  std::vector<std::vector<std::size_t>> members_;
  Rng rng_;
};

// num_classes <= 0 picks the task default.
ModelParams init_model(const TrainConfig& config, int num_classes = 0);

struct TrainResult {
  ModelParams params;
  std::vector<EpochReport> reports;
  int skipped_clips = 0;
};

using EpochCallback = std::function<void(const EpochReport&, const ModelParams&)>;

// Raised when a loss or gradient goes non-finite. When a checkpoint
// directory is configured the parameters from the start of the failing
// epoch are written to <ckpt_dir>/last_good.bank first.
class TrainingAborted : public Error {
 public:
  using Error::Error;
};

TrainResult train_kws(const TrainConfig& config, const Dataset& data, const EpochCallback& on_epoch = {},
                      std::ostream* log = nullptr);
TrainResult train_asr(const TrainConfig& config, const Dataset& data, const EpochCallback& on_epoch = {},
                      std::ostream* log = nullptr);
TrainResult train(const TrainConfig& config, const Dataset& data, const EpochCallback& on_epoch = {},
                  std::ostream* log = nullptr);

// KWS: top-1 accuracy %. ASR: corpus PER % (total edits / total reference
// length). Uses `indices` into the dataset, or every clip when empty.
double evaluate(const ModelParams& params, const Dataset& data, const std::vector<std::size_t>& indices,
                const MaskSpec& mask = {});

// KWS top-1 accuracy % from predicted and reference classes.
double accuracy_percent(const std::vector<int>& predicted, const std::vector<int>& reference);
// Corpus PER: sum of edit distances over sum of reference lengths.
double corpus_per(const std::vector<std::vector<int>>& hyps, const std::vector<std::vector<int>>& refs);

// Mean training loss over `indices` without updating anything.
double mean_loss(const ModelParams& params, const Dataset& data, const std::vector<std::size_t>& indices,
                 const MaskSpec& mask = {});

std::string format_epoch_csv_header(bool with_time);
std::string format_epoch_csv_row(const EpochReport& report, bool with_time);

}  // namespace tfront
