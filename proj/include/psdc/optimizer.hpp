// Copyright 2026 The psdc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PSDC_OPTIMIZER_HPP_
#define PSDC_OPTIMIZER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psdc/data_model.hpp"
#include "psdc/objective.hpp"

namespace psdc {

enum class AlphaMode {
  sqrt_max_entry,  // alpha_scale * sqrt(max |M_ij|)
  max_entry,       // alpha_scale * max |M_ij|
  fixed,           // alpha_value
};

enum class LambdaMode {
  spectral_norm,  // spectral_lambda_scale * ||Omega - pJ||
  sqrt_np,        // sqrt_np_lambda_scale * sqrt(n p)
  fixed,          // lambda_value
};

struct SolveConfig {
  std::size_t rank = 1;
  std::size_t max_iters = 1000;
  double grad_tol = 1e-3;
  double step_tol = 1e-10;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  int max_backtracks = 60;
  // First trial step; later searches start from twice the previous accepted step.
  double initial_step = 1.0;
  std::uint64_t init_seed = 0;

  AlphaMode alpha_mode = AlphaMode::sqrt_max_entry;
  double alpha_scale = 100.0;
  double alpha_value = 1.0;
  LambdaMode lambda_mode = LambdaMode::spectral_norm;
  double spectral_lambda_scale = 100.0;
  double sqrt_np_lambda_scale = 500.0;
  double lambda_value = 0.0;

  void validate() const;
};

enum class Termination { grad_tol, step_tol, max_iters };

std::string_view to_string(Termination reason);

struct IterationRecord {
  double f_value = 0.0;
  double grad_norm = 0.0;
  // Accepted step from this iterate; 0 on the final record.
  double step_size = 0.0;
};

struct SolveTrace {
  std::vector<IterationRecord> iterations;
  Termination reason = Termination::max_iters;
  double wall_seconds = 0.0;
  ObjectiveParams params;

  std::size_t steps() const { return iterations.empty() ? 0 : iterations.size() - 1; }
};

struct SolveResult {
  Factor x;
  SolveTrace trace;
};

/// i.i.d. N(0, 1) entries drawn in row-major order from CounterRng(seed).
Factor init_factor(std::size_t n, std::size_t r, std::uint64_t seed);

/// alpha and lambda from the observed sample according to the config's modes.
/// Throws std::invalid_argument when an automatic mode has nothing to work from
/// (empty sample, or all-zero values for alpha).
ObjectiveParams tune_params(const SampledMatrix& m, const SolveConfig& cfg = {});

struct LineSearchResult {
  double eta = 0.0;
  double f_value = 0.0;
  int backtracks = 0;
  bool accepted = false;
};

/// Tries eta = eta0 * shrink^k for k = 0..max_backtracks and accepts the first with
///   f_at(eta) <= f0 - c * eta * grad_sq.
/// f_at may return +inf for an unusable trial point.
template <class F>
LineSearchResult backtracking_search(F&& f_at, double f0, double grad_sq, double eta0,
                                     double c, double shrink, int max_backtracks) {
  double eta = eta0;
  for (int k = 0; k <= max_backtracks; ++k) {
    const double trial = f_at(eta);
    if (trial <= f0 - c * eta * grad_sq) return {eta, trial, k, true};
    eta *= shrink;
  }
  return {eta, f0, max_backtracks, false};
}

struct ArmijoStep {
  double eta = 0.0;
  std::optional<Factor> x_next;  // empty when the search is exhausted
  double f_next = 0.0;
  int backtracks = 0;
  bool exhausted = false;
};

/// One Armijo step from x along -g, where g is the gradient of f at x.
ArmijoStep armijo_step(const SampledMatrix& m, const ObjectiveParams& params, const Factor& x,
                       const Factor& g, double eta0, const SolveConfig& cfg);
/// Same, with f(x) already known.
ArmijoStep armijo_step(const SampledMatrix& m, const ObjectiveParams& params, const Factor& x,
                       const Factor& g, double eta0, const SolveConfig& cfg, double f_x);

/// Gradient descent with Armijo steps from a random Gaussian start. Stops when
/// ||grad f||_F <= grad_tol, when ||eta grad f||_F <= step_tol (or backtracking is
/// exhausted), or after max_iters steps.
SolveResult solve(const SampledMatrix& m, const SolveConfig& cfg);

/// Same, with explicit objective parameters (no tuning).
SolveResult solve(const SampledMatrix& m, const SolveConfig& cfg, const ObjectiveParams& params);

/// One JSON object per line: {"iter", "f", "grad_norm", "step"}.
std::string trace_to_jsonl(const SolveTrace& trace);

}  // namespace psdc

#endif  // PSDC_OPTIMIZER_HPP_
