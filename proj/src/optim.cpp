// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#include "tfront/optim.hpp"

#include <cmath>

#include "tfront/common.hpp"

namespace tfront {

std::string_view setting_name(TrainSetting setting) {
  switch (setting) {
    case TrainSetting::A: return "A";
    case TrainSetting::B: return "B";
    case TrainSetting::C: return "C";
    case TrainSetting::D: return "D";
  }
  return "?";
}

TrainSetting parse_setting(std::string_view name) {
  if (name == "A" || name == "a") return TrainSetting::A;
  if (name == "B" || name == "b") return TrainSetting::B;
  if (name == "C" || name == "c") return TrainSetting::C;
  if (name == "D" || name == "d") return TrainSetting::D;
  throw ArgumentError("unknown setting '" + std::string(name) + "' (expected A, B, C or D)");
}

std::string_view group_name(ParamGroup group) {
  switch (group) {
    case ParamGroup::Classifier: return "classifier";
    case ParamGroup::Mel: return "mel";
    case ParamGroup::Stft: return "stft";
  }
  return "?";
}

std::set<ParamGroup> trainable_groups(TrainSetting setting) {
  switch (setting) {
    case TrainSetting::A: return {ParamGroup::Classifier};
    case TrainSetting::B: return {ParamGroup::Classifier, ParamGroup::Mel};
    case TrainSetting::C: return {ParamGroup::Classifier, ParamGroup::Stft};
    case TrainSetting::D: return {ParamGroup::Classifier, ParamGroup::Mel, ParamGroup::Stft};
  }
  return {};
}

namespace {

void check_finite(std::span<const double> grads, std::string_view name) {
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw NonFiniteError("non-finite gradient " + std::to_string(grads[i]) + " in " + std::string(name) +
                           "[" + std::to_string(i) + "]");
    }
  }
}

}  // namespace

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamHyper& hyper, std::string_view name) {
  if (params.size() != grads.size()) throw ContractViolation("adam_step: size mismatch for " + std::string(name));
  check_finite(grads, name);
  if (state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size()) throw ContractViolation("adam_step: state size mismatch for " + std::string(name));
  ++state.step;
  const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * g;
    state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= hyper.lr * m_hat / (std::sqrt(v_hat) + hyper.eps);
  }
}

Optimizer::Optimizer(AdamHyper base, std::set<ParamGroup> trainable, std::map<ParamGroup, double> lr_overrides)
    : base_(base), trainable_(std::move(trainable)), lr_overrides_(std::move(lr_overrides)) {}

double Optimizer::lr_for(ParamGroup group) const {
  const auto it = lr_overrides_.find(group);
  return it == lr_overrides_.end() ? base_.lr : it->second;
}

void Optimizer::step(std::span<const ParamView> params, std::span<const GradView> grads) {
  const auto find_grad = [&](const std::string& name) -> const GradView* {
    for (const auto& g : grads) {
      if (g.name == name) return &g;
    }
    return nullptr;
  };
  for (const auto& p : params) {
    if (!is_trainable(p.group)) continue;
    if (const GradView* g = find_grad(p.name)) check_finite(g->values, p.name);
  }
  for (const auto& p : params) {
    if (!is_trainable(p.group)) continue;
    const GradView* g = find_grad(p.name);
    if (!g) continue;
    AdamHyper hyper = base_;
    hyper.lr = lr_for(p.group);
    adam_step(p.values, g->values, state_[p.name], hyper, p.name);
  }
  ++steps_;
}

}  // namespace tfront
