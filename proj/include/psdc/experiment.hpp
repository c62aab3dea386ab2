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

#ifndef PSDC_EXPERIMENT_HPP_
#define PSDC_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psdc/optimizer.hpp"

namespace psdc {

enum class Scenario {
  full_rank,               // (10,10,10,10,s5,1,...,1), sweep over s5
  extreme_kappa,           // (10,10,10,10,10/kappa,0,...), sweep over kappa (inf allowed)
  rank_mismatch_fixed_M,   // rank(M) = true_rank, sweep over the selected rank r
  rank_mismatch_fixed_r,   // selected rank r, sweep over rank(M)
  kpca_two_spheres,        // radial-kernel matrix of a fixed two-sphere sample
  custom,                  // explicit eigenvalues
};

enum class Spectrum { constant, decreasing };
enum class Method { nonconvex, spectral, nystrom };

std::string_view to_string(Scenario s);
std::string_view to_string(Method m);
Scenario parse_scenario(std::string_view s);
Method parse_method(std::string_view s);

struct ExperimentConfig {
  Scenario scenario = Scenario::custom;
  std::size_t n = 500;
  std::size_t r = 5;
  double p = 0.2;
  /// Scenario-specific sweep; empty picks the scenario's default list.
  std::vector<double> sweep;
  Spectrum spectrum = Spectrum::constant;
  std::size_t true_rank = 10;
  /// custom scenario only.
  std::vector<double> eigenvalues;
  /// One eigenvector draw serves all settings unless this is set.
  bool redraw_eigenvectors = false;

  AlphaMode alpha_mode = AlphaMode::max_entry;
  double alpha_scale = 100.0;
  double alpha_value = 1.0;
  LambdaMode lambda_mode = LambdaMode::spectral_norm;
  double spectral_lambda_scale = 100.0;
  double sqrt_np_lambda_scale = 500.0;
  double lambda_value = 0.0;
  std::size_t max_iters = 1000;
  double grad_tol = 1e-3;

  /// Evaluate K(X) (dense, small n only) at solves that stop on the gradient tolerance.
  bool compute_k = false;

  // kpca_two_spheres
  double gamma = 1.0;
  std::size_t columns = 50;
  /// p_NCVX = nystrom_sampling_rate(n, columns) / p_ratio.
  double p_ratio = 2.5;
  std::size_t kmeans_reps = 20;
  /// Dense relative errors against M and M_r (forms the n x n kernel matrix once).
  bool kpca_errors = false;

  std::vector<Method> methods{Method::nonconvex, Method::spectral};
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  /// 0 uses std::thread::hardware_concurrency().
  std::size_t threads = 0;
  bool include_timing = true;
  /// Output prefix: the CLI writes <output>.json and <output>.csv when set.
  std::string output;

  /// Throws std::invalid_argument for p outside (0, 1], trials < 1, empty methods, ...
  void validate() const;
};

/// Parses a JSON object; unknown keys are rejected. Sweep entries may be numbers or "inf".
ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::string& path);

/// One point of a sweep.
struct Setting {
  std::string label;
  double value = 0.0;
  std::size_t rank = 0;              // selected rank r
  std::vector<double> eigenvalues;   // nonzero leading part of the spectrum
};

/// Settings a config expands to, in sweep order. A kpca config yields one setting.
std::vector<Setting> expand_settings(const ExperimentConfig& cfg);

struct TrialRecord {
  std::size_t setting = 0;
  std::size_t trial = 0;
  Method method = Method::nonconvex;
  std::optional<double> re_r;     // vs M_r
  std::optional<double> re_full;  // vs M
  std::optional<double> accuracy;
  std::size_t iterations = 0;
  std::string termination;  // nonconvex only
  std::optional<double> f_value;
  std::optional<double> grad_norm;
  std::optional<double> k_total;
  std::optional<double> k_identity_gap;
  double p_effective = 0.0;
  std::size_t storage_entries = 0;  // sample + factor for nonconvex, C + W + factor for Nystrom
  double seconds = 0.0;
  std::string error;  // non-empty when the trial threw
};

struct RunReport {
  ExperimentConfig config;
  std::vector<Setting> settings;
  std::vector<TrialRecord> trials;  // ordered by (setting, trial, method)
  double seconds = 0.0;

  /// Records of one (setting, method) in trial order.
  std::vector<const TrialRecord*> select(std::size_t setting, Method method) const;
};

RunReport run_experiment(const ExperimentConfig& cfg);

struct Quantiles {
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
  std::size_t count = 0;
};

/// Linear-interpolation quantiles. Throws std::invalid_argument for an empty input.
Quantiles quantiles(std::vector<double> values);

/// JSON with a config echo, per-trial records and per-(setting, method, metric)
/// quantiles. Timing fields are left out unless config.include_timing.
std::string report_to_json(const RunReport& report);
/// "setting,value,method,metric,count,min,q1,median,q3,max" rows.
std::string report_to_csv(const RunReport& report);

}  // namespace psdc

#endif  // PSDC_EXPERIMENT_HPP_
