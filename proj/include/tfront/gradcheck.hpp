// Copyright 2026 The tfront Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tfront/rng.hpp"

namespace tfront {

struct GradcheckOptions {
  double step = 1e-4;
  double tolerance = 1e-4;
  // Denominator floor as a fraction of the largest analytic entry.
  double floor_fraction = 1e-6;
};

struct GradcheckResult {
  std::string suite;
  std::size_t checked = 0;
  double max_rel_error = 0.0;
  double tolerance = 1e-4;
  bool passed() const { return checked > 0 && max_rel_error < tolerance; }
};

// |a - n| / max(|a|, |n|, floor). `floor` keeps coordinates whose true
// gradient is ~0 from dominating through round-off.
double relative_error(double analytic, double numeric, double floor);

// Central differences of loss() over param[coords]; loss() must read the
// current contents of `param`.
GradcheckResult check_gradient(std::string suite, const std::function<double()>& loss, std::span<double> param,
                               std::span<const double> analytic, std::span<const std::size_t> coords,
                               const GradcheckOptions& options = {});

// Every index when k >= n, otherwise k distinct indices drawn from rng.
std::vector<std::size_t> sample_coords(std::size_t n, std::size_t k, Rng& rng);

// The full finite-difference battery: STFT kernels, both Mel styles, linear
// head, LSTM for several lengths, softmax cross-entropy, CTC, and the two
// end-to-end pipelines.
std::vector<GradcheckResult> run_gradcheck_suites(std::uint64_t seed, const GradcheckOptions& options = {});

}  // namespace tfront
