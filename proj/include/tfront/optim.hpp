// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tfront {

// A: front-end frozen. B: Mel trainable. C: STFT trainable. D: both.
// The classifier is always trained.
enum class TrainSetting { A, B, C, D };

enum class ParamGroup { Classifier, Mel, Stft };

std::string_view setting_name(TrainSetting setting);
TrainSetting parse_setting(std::string_view name);
std::string_view group_name(ParamGroup group);

std::set<ParamGroup> trainable_groups(TrainSetting setting);

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step = 0;
};

// One bias-corrected Adam update. Throws NonFiniteError (leaving `params`
// untouched) if any gradient entry is not finite.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamHyper& hyper, std::string_view name = "param");

// A named view of one parameter tensor and the group it belongs to.
struct ParamView {
  std::string name;
  ParamGroup group;
  std::span<double> values;
};

struct GradView {
  std::string name;
  std::span<const double> values;
};

// Adam over a fixed set of named tensors with per-group trainability and
// learning rates.
class Optimizer {
 public:
  Optimizer(AdamHyper base, std::set<ParamGroup> trainable,
            std::map<ParamGroup, double> lr_overrides = {});

  bool is_trainable(ParamGroup group) const { return trainable_.contains(group); }
  double lr_for(ParamGroup group) const;

  // Updates every trainable tensor that has a gradient of the same name.
  // Gradients are validated for all tensors before any update happens.
  void step(std::span<const ParamView> params, std::span<const GradView> grads);

  std::int64_t steps_taken() const { return steps_; }

 private:
  AdamHyper base_;
  std::set<ParamGroup> trainable_;
  std::map<ParamGroup, double> lr_overrides_;
  std::map<std::string, AdamState> state_;
  std::int64_t steps_ = 0;
};

}  // namespace tfront
