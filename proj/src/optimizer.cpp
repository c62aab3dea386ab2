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

#include "psdc/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "psdc/rng.hpp"
#include "psdc/sampling.hpp"

namespace psdc {

void SolveConfig::validate() const {
  if (rank < 1) throw std::invalid_argument("SolveConfig: rank must be >= 1");
  if (!(grad_tol > 0.0) || !(step_tol > 0.0)) {
    throw std::invalid_argument("SolveConfig: tolerances must be positive");
  }
  if (!(armijo_c > 0.0 && armijo_c < 1.0) || !(armijo_shrink > 0.0 && armijo_shrink < 1.0)) {
    throw std::invalid_argument("SolveConfig: Armijo constants must lie in (0, 1)");
  }
  if (max_backtracks < 0) throw std::invalid_argument("SolveConfig: max_backtracks < 0");
  if (!(initial_step > 0.0)) throw std::invalid_argument("SolveConfig: initial_step <= 0");
}

std::string_view to_string(Termination reason) {
  switch (reason) {
    case Termination::grad_tol: return "grad_tol";
    case Termination::step_tol: return "step_tol";
    case Termination::max_iters: return "max_iters";
  }
  return "unknown";
}

Factor init_factor(std::size_t n, std::size_t r, std::uint64_t seed) {
  if (n < 1 || r < 1) throw std::invalid_argument("init_factor: n and r must be >= 1");
  CounterRng rng(seed);
  RowMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index k = 0; k < x.cols(); ++k) x(i, k) = rng.normal();
  }
  return Factor(std::move(x));
}

ObjectiveParams tune_params(const SampledMatrix& m, const SolveConfig& cfg) {
  ObjectiveParams params;
  const bool needs_sample =
      cfg.alpha_mode != AlphaMode::fixed || cfg.lambda_mode == LambdaMode::spectral_norm;
  if (needs_sample && m.pair_count() == 0) {
    throw std::invalid_argument("tune_params: empty sample");
  }
  const double max_entry = m.max_abs_value();
  switch (cfg.alpha_mode) {
    case AlphaMode::sqrt_max_entry: params.alpha = cfg.alpha_scale * std::sqrt(max_entry); break;
    case AlphaMode::max_entry: params.alpha = cfg.alpha_scale * max_entry; break;
    case AlphaMode::fixed: params.alpha = cfg.alpha_value; break;
  }
  if (!(params.alpha > 0.0)) {
    throw std::invalid_argument("tune_params: alpha must be positive (all-zero sample?)");
  }
  switch (cfg.lambda_mode) {
    case LambdaMode::spectral_norm:
      params.lambda =
          cfg.spectral_lambda_scale * spectral_norm_centered(m.pattern(), m.p_nominal()).value;
      break;
    case LambdaMode::sqrt_np:
      params.lambda = cfg.sqrt_np_lambda_scale *
                      std::sqrt(static_cast<double>(m.n()) * m.p_nominal());
      break;
    case LambdaMode::fixed: params.lambda = cfg.lambda_value; break;
  }
  params.validate();
  return params;
}

ArmijoStep armijo_step(const SampledMatrix& m, const ObjectiveParams& params, const Factor& x,
                       const Factor& g, double eta0, const SolveConfig& cfg, double f_x) {
  if (g.n() != x.n() || g.r() != x.r()) throw std::invalid_argument("armijo_step: shape mismatch");
  const double grad_sq = g.values().squaredNorm();
  std::optional<Factor> last;
  const auto f_at = [&](double eta) {
    last.reset();
    last = Factor::try_from(x.values() - eta * g.values());
    if (!last) return std::numeric_limits<double>::infinity();
    const double value = f_value(*last, m, params);
    return std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
  };
  const auto search = backtracking_search(f_at, f_x, grad_sq, eta0, cfg.armijo_c,
                                          cfg.armijo_shrink, cfg.max_backtracks);
  ArmijoStep step;
  step.eta = search.eta;
  step.backtracks = search.backtracks;
  step.exhausted = !search.accepted;
  if (search.accepted) {
    step.f_next = search.f_value;
    step.x_next = std::move(last);
  } else {
    step.f_next = f_x;
  }
  return step;
}

ArmijoStep armijo_step(const SampledMatrix& m, const ObjectiveParams& params, const Factor& x,
                       const Factor& g, double eta0, const SolveConfig& cfg) {
  return armijo_step(m, params, x, g, eta0, cfg, f_value(x, m, params));
}

SolveResult solve(const SampledMatrix& m, const SolveConfig& cfg) {
  cfg.validate();
  return solve(m, cfg, tune_params(m, cfg));
}

SolveResult solve(const SampledMatrix& m, const SolveConfig& cfg, const ObjectiveParams& params) {
  cfg.validate();
  params.validate();
  const auto start = std::chrono::steady_clock::now();

  SolveTrace trace;
  trace.params = params;
  Factor x = init_factor(m.n(), cfg.rank, cfg.init_seed);
  double eta_prev = 0.5 * cfg.initial_step;
  bool small_step = false;

  for (std::size_t it = 0;; ++it) {
    auto [value, grad] = f_value_and_grad(x, m, params);
    const double grad_norm = grad.values().norm();
    trace.iterations.push_back({value, grad_norm, 0.0});
    if (grad_norm <= cfg.grad_tol) {
      trace.reason = Termination::grad_tol;
      break;
    }
    if (small_step) {
      trace.reason = Termination::step_tol;
      break;
    }
    if (it >= cfg.max_iters) {
      trace.reason = Termination::max_iters;
      break;
    }
    auto step = armijo_step(m, params, x, grad, 2.0 * eta_prev, cfg, value);
    if (step.exhausted) {
      trace.reason = Termination::step_tol;
      break;
    }
    trace.iterations.back().step_size = step.eta;
    small_step = step.eta * grad_norm <= cfg.step_tol;
    eta_prev = step.eta;
    x = std::move(*step.x_next);
  }

  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(x), std::move(trace)};
}

std::string trace_to_jsonl(const SolveTrace& trace) {
  std::ostringstream out;
  for (std::size_t t = 0; t < trace.iterations.size(); ++t) {
    const auto& rec = trace.iterations[t];
    nlohmann::json line = {
        {"iter", t}, {"f", rec.f_value}, {"grad_norm", rec.grad_norm}, {"step", rec.step_size}};
    out << line.dump() << '\n';
  }
  return out.str();
}

}  // namespace psdc
