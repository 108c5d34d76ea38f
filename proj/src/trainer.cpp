// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfront/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "tfront/losses.hpp"

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace tfront {
namespace {

constexpr std::uint64_t kInitStream = 0x1417;
constexpr std::uint64_t kSamplerStream = 0x5A3B;
constexpr std::uint64_t kShuffleStream = 0x5F1E;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Per-example gradients of the STFT kernels are ~2 MB each. Above glibc's
// default mmap threshold every one of them is a fresh mapping plus page
// faults, which doubled the cost of a trainable-STFT step.
void keep_large_blocks_on_heap() {
#if defined(__GLIBC__)
  static std::once_flag once;
  std::call_once(once, [] {
    mallopt(M_MMAP_THRESHOLD, 256 << 20);
    mallopt(M_TRIM_THRESHOLD, 512 << 20);
  });
#endif
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n) over `workers` lanes. Results must be written
// to per-index slots by fn, so scheduling never changes the outcome.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const auto lanes = static_cast<std::size_t>(std::max(1, std::min<int>(workers, static_cast<int>(n))));
  if (lanes <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(lanes);
  std::vector<std::thread> threads;
  threads.reserve(lanes);
  for (std::size_t lane = 0; lane < lanes; ++lane) {
    threads.emplace_back([&, lane] {
      try {
        for (std::size_t i = lane; i < n; i += lanes) fn(i);
      } catch (...) {
        errors[lane] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::map<ParamGroup, double> lr_overrides(const TrainConfig& config) {
  std::map<ParamGroup, double> out;
  if (config.lr_mel) out[ParamGroup::Mel] = *config.lr_mel;
  if (config.lr_stft) out[ParamGroup::Stft] = *config.lr_stft;
  return out;
}

// Spectrograms of stages that stay frozen for the whole run.
struct FrozenCache {
  std::vector<Spectrogram> magnitude;
  std::vector<Spectrogram> features;

  ExampleInput input(const Dataset& data, std::size_t i) const {
    ExampleInput in;
    in.samples = data.clips[i].samples;
    if (!magnitude.empty()) in.magnitude = &magnitude[i];
    if (!features.empty()) in.features = &features[i];
    return in;
  }
};

FrozenCache build_cache(const ModelParams& params, const Dataset& data, const MaskSpec& mask, GradRequest request,
                        int workers) {
  FrozenCache cache;
  if (request.stft) return cache;
  cache.magnitude.resize(data.clips.size());
  parallel_for(data.clips.size(), workers,
               [&](std::size_t i) { cache.magnitude[i] = masked_magnitude(params, data.clips[i].samples, mask); });
  if (!request.mel) {
    cache.features.resize(data.clips.size());
    parallel_for(data.clips.size(), workers,
                 [&](std::size_t i) { cache.features[i] = mel_forward(cache.magnitude[i], params.mel); });
    cache.magnitude.clear();
  }
  return cache;
}

double evaluate_with(const ModelParams& params, const Dataset& data, const std::vector<std::size_t>& indices,
                     const MaskSpec& mask, const FrozenCache& cache, int workers) {
  if (data.manifest.task == Task::Kws) {
    std::vector<int> predicted(indices.size()), reference(indices.size());
    parallel_for(indices.size(), workers, [&](std::size_t n) {
      const std::size_t i = indices[n];
      Eigen::Index best = 0;
      kws_logits(params, cache.input(data, i), mask).maxCoeff(&best);
      predicted[n] = static_cast<int>(best);
      reference[n] = data.clips[i].label.class_index;
    });
    return accuracy_percent(predicted, reference);
  }
  std::vector<std::vector<int>> hyps(indices.size()), refs(indices.size());
  parallel_for(indices.size(), workers, [&](std::size_t n) {
    const std::size_t i = indices[n];
    hyps[n] = greedy_ctc_decode(asr_log_probs(params, cache.input(data, i), mask), kBlank);
    refs[n] = data.clips[i].label.symbols;
  });
  return corpus_per(hyps, refs);
}

void write_checkpoint(const TrainConfig& config, const ModelParams& params, const std::string& name) {
  if (config.ckpt_dir.empty()) return;
  std::filesystem::create_directories(config.ckpt_dir);
  save_params(params, config.ckpt_dir / name);
}

std::string epoch_checkpoint_name(int epoch) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "epoch_%03d.bank", epoch);
  return buf;
}

[[noreturn]] void abort_training(const TrainConfig& config, const ModelParams& last_good, int epoch,
                                 const std::string& why) {
  write_checkpoint(config, last_good, "last_good.bank");
  throw TrainingAborted("training aborted in epoch " + std::to_string(epoch) + ": " + why +
                        (config.ckpt_dir.empty() ? "" : " (last good parameters in last_good.bank)"));
}

// Shared epoch loop. `next_batch` fills the dataset indices of the next
// step; `example_loss` evaluates one example with gradients.
template <typename BatchFn, typename LossFn>
TrainResult run_training(const TrainConfig& config, const Dataset& data, const DataSplit& split,
                         int steps_per_epoch, BatchFn&& next_batch, LossFn&& example_loss,
                         const EpochCallback& on_epoch) {
  keep_large_blocks_on_heap();
  const int workers = resolve_workers(config.workers);
  TrainResult result;
  result.params = init_model(config, data.manifest.num_classes());
  ModelParams& params = result.params;
  const std::set<ParamGroup> groups = trainable_groups(config.setting);
  const GradRequest request{groups.contains(ParamGroup::Stft), groups.contains(ParamGroup::Mel)};
  Optimizer optimizer(AdamHyper{config.lr}, groups, lr_overrides(config));
  const FrozenCache cache = build_cache(params, data, config.mask, request, workers);

  std::vector<std::size_t> batch;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams last_good = params;
    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    for (int step = 0; step < steps_per_epoch; ++step) {
      next_batch(epoch, step, batch);
      if (batch.empty()) continue;
      std::vector<ModelGrads> grads(batch.size());
      std::vector<double> losses(batch.size());
      parallel_for(batch.size(), workers, [&](std::size_t n) {
        losses[n] = example_loss(params, cache.input(data, batch[n]), batch[n], request, &grads[n]);
      });
      ModelGrads total;
      double batch_loss = 0.0;
      for (std::size_t n = 0; n < batch.size(); ++n) {
        total.accumulate(grads[n]);
        batch_loss += losses[n];
      }
      if (!std::isfinite(batch_loss)) abort_training(config, last_good, epoch, "non-finite loss");
      total.scale(1.0 / static_cast<double>(batch.size()));
      try {
        optimizer.step(param_views(params), grad_views(total));
      } catch (const NonFiniteError& e) {
        abort_training(config, last_good, epoch, e.what());
      }
      if (request.mel) params.mel.clamp_parameters();
      loss_sum += batch_loss;
      loss_count += batch.size();
    }
    EpochReport report;
    report.epoch = epoch;
    report.train_loss = loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0;
    report.metric = evaluate_with(params, data, split.eval, config.mask, cache, workers);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.reports.push_back(report);
    write_checkpoint(config, params, epoch_checkpoint_name(epoch));
    if (on_epoch) on_epoch(report, params);
  }
  return result;
}

}  // namespace

void validate_config(const TrainConfig& config) {
  if (config.n_mels < 1) throw ConfigError("n_mels must be >= 1");
  if (config.epochs < 0) throw ConfigError("epochs must be >= 0");
  if (config.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(config.lr > 0.0)) throw ConfigError("lr must be positive");
  if (config.lr_mel && !(*config.lr_mel > 0.0)) throw ConfigError("lr.mel must be positive");
  if (config.lr_stft && !(*config.lr_stft > 0.0)) throw ConfigError("lr.stft must be positive");
  if (config.hidden_size < 1) throw ConfigError("hidden size must be >= 1");
  if (config.mel_init == MelInit::Random && config.mel_style != MelStyle::FreeForm) {
    throw ConfigError("random Mel initialization requires the freeform style");
  }
  validate_mask(config.mask);
}

DataSplit split_dataset(const DatasetManifest& manifest) {
  DataSplit split;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    (fnv1a(manifest.entries[i].source) % 5 == 0 ? split.eval : split.train).push_back(i);
  }
  return split;
}

WeightedSampler::WeightedSampler(std::vector<int> labels, int num_classes, std::uint64_t seed)
    : members_(static_cast<std::size_t>(std::max(0, num_classes))), rng_(seed) {
  if (num_classes < 1) throw ConfigError("sampler: need at least one class");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) throw ConfigError("sampler: label out of range");
    members_[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  for (std::size_t c = 0; c < members_.size(); ++c) {
    if (members_[c].empty()) throw ConfigError("sampler: class " + std::to_string(c) + " has no training clips");
  }
}

std::size_t WeightedSampler::next() {
  const auto& pool = members_[rng_.below(members_.size())];
  return pool[rng_.below(pool.size())];
}

ModelParams init_model(const TrainConfig& config, int num_classes) {
  validate_config(config);
  const std::set<ParamGroup> groups = trainable_groups(config.setting);
  Rng rng(mix_seed(config.seed, kInitStream));
  ModelParams p;
  p.task = config.task;
  p.stft = init_stft_kernels();
  p.stft.trainable = groups.contains(ParamGroup::Stft);
  if (config.mel_style == MelStyle::ShapeConstrained) {
    p.mel = init_mel_constrained(config.n_mels);
  } else if (config.mel_init == MelInit::Random) {
    p.mel = init_mel_random(config.n_mels, mix_seed(config.seed, kInitStream, 1));
  } else {
    p.mel = init_mel_freeform(config.n_mels);
  }
  p.mel.trainable = groups.contains(ParamGroup::Mel);
  if (num_classes <= 0) num_classes = config.task == Task::Kws ? kKwsClasses : kAsrClasses;
  if (config.task == Task::Kws) {
    const int frames = stft_frame_count(kKwsClipSamples, p.stft.hop);
    p.head = init_linear(num_classes, frames * config.n_mels, rng);
  } else {
    p.lstm = init_lstm(config.n_mels, config.hidden_size, rng);
    p.head = init_linear(num_classes, config.hidden_size, rng);
  }
  return p;
}

TrainResult train_kws(const TrainConfig& config, const Dataset& data, const EpochCallback& on_epoch,
                      std::ostream* log) {
  validate_config(config);
  if (data.manifest.task != Task::Kws) throw ConfigError("train_kws: dataset is not a KWS manifest");
  for (const auto& clip : data.clips) {
    if (clip.samples.size() != static_cast<std::size_t>(kKwsClipSamples)) {
      throw ConfigError("train_kws: KWS clips must be exactly one second (16000 samples)");
    }
  }
  const DataSplit split = split_dataset(data.manifest);
  if (split.train.empty()) throw ConfigError("train_kws: empty training split");
  std::vector<int> labels;
  for (std::size_t i : split.train) labels.push_back(data.clips[i].label.class_index);
  WeightedSampler sampler(labels, data.manifest.num_classes(), mix_seed(config.seed, kSamplerStream));
  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  const int steps = static_cast<int>((split.train.size() + batch_size - 1) / batch_size);
  if (log) *log << "# kws: " << split.train.size() << " train / " << split.eval.size() << " eval clips\n";

  auto next_batch = [&](int, int, std::vector<std::size_t>& batch) {
    batch.resize(batch_size);
    for (auto& b : batch) b = split.train[sampler.next()];
  };
  auto loss = [&](const ModelParams& params, const ExampleInput& in, std::size_t i, GradRequest request,
                  ModelGrads* grads) {
    return kws_loss(params, in, data.clips[i].label.class_index, config.mask, request, grads);
  };
  return run_training(config, data, split, steps, next_batch, loss, on_epoch);
}

TrainResult train_asr(const TrainConfig& config, const Dataset& data, const EpochCallback& on_epoch,
                      std::ostream* log) {
  validate_config(config);
  if (data.manifest.task != Task::Asr) throw ConfigError("train_asr: dataset is not an ASR manifest");
  DataSplit split = split_dataset(data.manifest);
  std::vector<std::size_t> pool;
  int skipped = 0;
  for (std::size_t i : split.train) {
    const auto& clip = data.clips[i];
    if (clip.label.symbols.empty() ||
        stft_frame_count(clip.samples.size(), kHop) < ctc_min_frames(clip.label.symbols)) {
      ++skipped;
      if (log) *log << "# warning: skipping CTC-infeasible clip " << data.manifest.entries[i].source << "\n";
      continue;
    }
    pool.push_back(i);
  }
  if (pool.empty()) throw ConfigError("train_asr: no feasible training clips");
  // Eval clips with an empty reference cannot be scored.
  std::erase_if(split.eval, [&](std::size_t i) { return data.clips[i].label.symbols.empty(); });
  if (log) *log << "# asr: " << pool.size() << " train / " << split.eval.size() << " eval utterances\n";

  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  const int steps = static_cast<int>((pool.size() + batch_size - 1) / batch_size);
  std::vector<std::size_t> order;
  auto next_batch = [&](int epoch, int step, std::vector<std::size_t>& batch) {
    if (step == 0) {
      order = pool;
      Rng rng(mix_seed(config.seed, kShuffleStream, static_cast<std::uint64_t>(epoch)));
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    }
    const std::size_t first = static_cast<std::size_t>(step) * batch_size;
    const std::size_t last = std::min(order.size(), first + batch_size);
    batch.assign(order.begin() + static_cast<std::ptrdiff_t>(first), order.begin() + static_cast<std::ptrdiff_t>(last));
  };
  auto loss = [&](const ModelParams& params, const ExampleInput& in, std::size_t i, GradRequest request,
                  ModelGrads* grads) {
    return asr_loss(params, in, data.clips[i].label.symbols, config.mask, request, grads);
  };
  TrainResult result = run_training(config, data, split, steps, next_batch, loss, on_epoch);
  result.skipped_clips = skipped;
  return result;
}

TrainResult train(const TrainConfig& config, const Dataset& data, const EpochCallback& on_epoch, std::ostream* log) {
  return config.task == Task::Kws ? train_kws(config, data, on_epoch, log) : train_asr(config, data, on_epoch, log);
}

double evaluate(const ModelParams& params, const Dataset& data, const std::vector<std::size_t>& indices,
                const MaskSpec& mask) {
  std::vector<std::size_t> all = indices;
  if (all.empty()) {
    for (std::size_t i = 0; i < data.clips.size(); ++i) all.push_back(i);
  }
  return evaluate_with(params, data, all, mask, FrozenCache{}, resolve_workers(0));
}

double accuracy_percent(const std::vector<int>& predicted, const std::vector<int>& reference) {
  if (predicted.size() != reference.size()) throw ContractViolation("accuracy: size mismatch");
  if (reference.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == reference[i] ? 1 : 0;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(reference.size());
}

double corpus_per(const std::vector<std::vector<int>>& hyps, const std::vector<std::vector<int>>& refs) {
  if (hyps.size() != refs.size()) throw ContractViolation("corpus_per: size mismatch");
  std::size_t edits = 0;
  std::size_t length = 0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    edits += edit_distance(hyps[i], refs[i]);
    length += refs[i].size();
  }
  if (length == 0) throw ArgumentError("corpus_per: empty references");
  return 100.0 * static_cast<double>(edits) / static_cast<double>(length);
}

double mean_loss(const ModelParams& params, const Dataset& data, const std::vector<std::size_t>& indices,
                 const MaskSpec& mask) {
  if (indices.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i : indices) {
    ExampleInput in;
    in.samples = data.clips[i].samples;
    total += data.manifest.task == Task::Kws
                 ? kws_loss(params, in, data.clips[i].label.class_index, mask, {}, nullptr)
                 : asr_loss(params, in, data.clips[i].label.symbols, mask, {}, nullptr);
  }
  return total / static_cast<double>(indices.size());
}

std::string format_epoch_csv_header(bool with_time) {
  return with_time ? "epoch,train_loss,metric,wall_seconds" : "epoch,train_loss,metric";
}

std::string format_epoch_csv_row(const EpochReport& r, bool with_time) {
  std::string row = std::to_string(r.epoch) + "," + format_double(r.train_loss) + "," + format_double(r.metric);
  if (with_time) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r.wall_seconds);
    row += ",";
    row += buf;
  }
  return row;
}

}  // namespace tfront
