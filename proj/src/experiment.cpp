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

#include "psdc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/Core>

#include "json.hpp"
#include "psdc/baselines.hpp"
#include "psdc/kernels.hpp"
#include "psdc/lanczos.hpp"
#include "psdc/metrics.hpp"
#include "psdc/rng.hpp"
#include "psdc/sampling.hpp"
#include "psdc/theory_lab.hpp"

namespace psdc {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  std::ostringstream out;
  out << v;
  return out.str();
}

std::string_view to_string(AlphaMode m) {
  switch (m) {
    case AlphaMode::sqrt_max_entry: return "sqrt_max_entry";
    case AlphaMode::max_entry: return "max_entry";
    case AlphaMode::fixed: return "fixed";
  }
  return "unknown";
}

std::string_view to_string(LambdaMode m) {
  switch (m) {
    case LambdaMode::spectral_norm: return "spectral_norm";
    case LambdaMode::sqrt_np: return "sqrt_np";
    case LambdaMode::fixed: return "fixed";
  }
  return "unknown";
}

std::string_view to_string(Spectrum s) {
  return s == Spectrum::constant ? "constant" : "decreasing";
}

AlphaMode parse_alpha_mode(std::string_view s) {
  for (auto m : {AlphaMode::sqrt_max_entry, AlphaMode::max_entry, AlphaMode::fixed}) {
    if (to_string(m) == s) return m;
  }
  throw std::invalid_argument("unknown alpha_mode: " + std::string(s));
}

LambdaMode parse_lambda_mode(std::string_view s) {
  for (auto m : {LambdaMode::spectral_norm, LambdaMode::sqrt_np, LambdaMode::fixed}) {
    if (to_string(m) == s) return m;
  }
  throw std::invalid_argument("unknown lambda_mode: " + std::string(s));
}

Spectrum parse_spectrum(std::string_view s) {
  if (s == "constant") return Spectrum::constant;
  if (s == "decreasing") return Spectrum::decreasing;
  throw std::invalid_argument("unknown spectrum: " + std::string(s));
}

double sweep_value(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  }
  throw std::invalid_argument("sweep entries must be numbers or \"inf\"");
}

json sweep_json(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

std::vector<double> default_sweep(Scenario s) {
  switch (s) {
    case Scenario::full_rank: return {10, 9, 8, 7, 6, 5, 4, 3, 2, 1};
    case Scenario::extreme_kappa:
      return {10, 20, 30, 40, 50, 100, 200, std::numeric_limits<double>::infinity()};
    case Scenario::rank_mismatch_fixed_M: return {5, 7, 9, 10, 11, 13, 15};
    case Scenario::rank_mismatch_fixed_r: {
      std::vector<double> v;
      for (int k = 1; k <= 15; ++k) v.push_back(k);
      return v;
    }
    default: return {};
  }
}

std::vector<double> low_rank_spectrum(Spectrum spectrum, std::size_t rank, bool fixed_m) {
  std::vector<double> sigma(rank, 10.0);
  if (spectrum == Spectrum::decreasing) {
    for (std::size_t k = 1; k <= rank; ++k) {
      // Fixed M: 2(R+1-k), i.e. 20, 18, ..., 2 for R = 10. Fixed r: 32 - 2k.
      sigma[k - 1] = fixed_m ? 2.0 * static_cast<double>(rank + 1 - k)
                             : 32.0 - 2.0 * static_cast<double>(k);
    }
  }
  return sigma;
}

std::size_t as_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v)) {
    throw std::invalid_argument(std::string(what) + " sweep values must be positive integers");
  }
  return static_cast<std::size_t>(v);
}

SolveConfig solver_config(const ExperimentConfig& cfg, std::size_t rank, std::uint64_t init_seed) {
  SolveConfig sc;
  sc.rank = rank;
  sc.max_iters = cfg.max_iters;
  sc.grad_tol = cfg.grad_tol;
  sc.init_seed = init_seed;
  sc.alpha_mode = cfg.alpha_mode;
  sc.alpha_scale = cfg.alpha_scale;
  sc.alpha_value = cfg.alpha_value;
  sc.lambda_mode = cfg.lambda_mode;
  sc.spectral_lambda_scale = cfg.spectral_lambda_scale;
  sc.sqrt_np_lambda_scale = cfg.sqrt_np_lambda_scale;
  sc.lambda_value = cfg.lambda_value;
  return sc;
}

/// Everything a trial needs that does not depend on the trial.
struct SettingData {
  std::optional<GroundTruth> truth;
  Eigen::MatrixXd full;       // M (empty for kpca without errors)
  Eigen::MatrixXd truncated;  // M_r
};

struct Shared {
  std::vector<SettingData> settings;
  std::optional<Dataset> data;
  KernelSpec kernel = KernelSpec::radial(1.0);
  double p_trial = 0.0;
};

Eigen::MatrixXd dense_top_part(const Eigen::MatrixXd& m, std::size_t r) {
  const auto n = static_cast<std::size_t>(m.rows());
  const EigenPairs pairs = top_eigenpairs(
      n, r, [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) { out.noalias() = m * v; });
  const Eigen::VectorXd vals = pairs.values.cwiseMax(0.0);
  return pairs.vectors * vals.asDiagonal() * pairs.vectors.transpose();
}

void fill_errors(TrialRecord& rec, const Factor& x, const SettingData& sd) {
  if (sd.full.size() == 0) return;
  rec.re_full = rel_error(x, sd.full);
  rec.re_r = rel_error(x, sd.truncated);
}

void run_trial(const ExperimentConfig& cfg, const Setting& setting, const SettingData& sd,
               const Shared& shared, std::size_t s, std::size_t t, TrialRecord* out) {
  const std::uint64_t base = derive_seed(cfg.seed, s + 1, t);
  const std::uint64_t mask_seed = derive_seed(base, 1);
  const std::uint64_t init_seed = derive_seed(base, 2);
  const std::uint64_t column_seed = derive_seed(base, 3);
  const std::uint64_t kmeans_seed = derive_seed(base, 4);
  const bool kpca = cfg.scenario == Scenario::kpca_two_spheres;
  const std::size_t n = cfg.n;
  const std::size_t r = setting.rank;

  std::optional<SampledMatrix> m;
  const auto sampled = [&]() -> const SampledMatrix& {
    if (!m) {
      const Mask mask = sample_mask(n, shared.p_trial, mask_seed);
      m = kpca ? build_sampled_kernel(*shared.data, shared.kernel, mask)
               : sample_dense(sd.full, mask);
    }
    return *m;
  };
  const auto cluster = [&](TrialRecord& rec, const Factor& x) {
    if (!kpca) return;
    const KMeansResult km = kmeans_rows(x, 2, cfg.kmeans_reps, kmeans_seed);
    rec.accuracy = clustering_accuracy(km.labels, *shared.data->labels());
  };

  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    TrialRecord& rec = out[mi];
    rec.setting = s;
    rec.trial = t;
    rec.method = cfg.methods[mi];
    const auto start = Clock::now();
    try {
      switch (rec.method) {
        case Method::nonconvex: {
          const SampledMatrix& mm = sampled();
          const SolveResult res = solve(mm, solver_config(cfg, r, init_seed));
          rec.iterations = res.trace.steps();
          rec.termination = std::string(to_string(res.trace.reason));
          if (!res.trace.iterations.empty()) {
            rec.f_value = res.trace.iterations.back().f_value;
            rec.grad_norm = res.trace.iterations.back().grad_norm;
          }
          rec.p_effective = shared.p_trial;
          const MemoryFootprint fp = memory_footprint(mm, r);
          rec.storage_entries = fp.sparse_entries + fp.factor_entries;
          fill_errors(rec, res.x, sd);
          cluster(rec, res.x);
          if (cfg.compute_k && sd.truth && res.trace.reason != Termination::max_iters) {
            const KBreakdown k = k_value(res.x, mm, res.trace.params, *sd.truth, r);
            rec.k_total = k.k_total;
            rec.k_identity_gap = k.identity_gap();
          }
          break;
        }
        case Method::spectral: {
          const SampledMatrix& mm = sampled();
          const SpectralResult res = spectral_truncate(mm, r);
          rec.p_effective = shared.p_trial;
          const MemoryFootprint fp = memory_footprint(mm, r);
          rec.storage_entries = fp.sparse_entries + fp.factor_entries;
          fill_errors(rec, res.factor, sd);
          cluster(rec, res.factor);
          break;
        }
        case Method::nystrom: {
          EntryOracle oracle;
          if (kpca) {
            oracle = [&](std::size_t i, std::size_t j) {
              return kernel_entry(shared.kernel, *shared.data, i, j);
            };
          } else {
            oracle = [&](std::size_t i, std::size_t j) {
              return sd.full(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            };
          }
          const Factor x = nystrom(oracle, n, cfg.columns, r, column_seed);
          rec.p_effective = nystrom_sampling_rate(n, cfg.columns);
          rec.storage_entries = n * cfg.columns + cfg.columns * cfg.columns + n * r;
          fill_errors(rec, x, sd);
          cluster(rec, x);
          break;
        }
      }
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    rec.seconds = seconds_since(start);
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["scenario"] = std::string(to_string(cfg.scenario));
  j["n"] = cfg.n;
  j["r"] = cfg.r;
  j["p"] = cfg.p;
  j["sweep"] = json::array();
  for (double v : cfg.sweep) j["sweep"].push_back(sweep_json(v));
  j["spectrum"] = std::string(to_string(cfg.spectrum));
  j["true_rank"] = cfg.true_rank;
  j["eigenvalues"] = cfg.eigenvalues;
  j["redraw_eigenvectors"] = cfg.redraw_eigenvectors;
  j["alpha_mode"] = std::string(to_string(cfg.alpha_mode));
  j["alpha_scale"] = cfg.alpha_scale;
  j["alpha_value"] = cfg.alpha_value;
  j["lambda_mode"] = std::string(to_string(cfg.lambda_mode));
  j["spectral_lambda_scale"] = cfg.spectral_lambda_scale;
  j["sqrt_np_lambda_scale"] = cfg.sqrt_np_lambda_scale;
  j["lambda_value"] = cfg.lambda_value;
  j["max_iters"] = cfg.max_iters;
  j["grad_tol"] = cfg.grad_tol;
  j["compute_k"] = cfg.compute_k;
  j["gamma"] = cfg.gamma;
  j["columns"] = cfg.columns;
  j["p_ratio"] = cfg.p_ratio;
  j["kmeans_reps"] = cfg.kmeans_reps;
  j["kpca_errors"] = cfg.kpca_errors;
  j["methods"] = json::array();
  for (Method m : cfg.methods) j["methods"].push_back(std::string(to_string(m)));
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["include_timing"] = cfg.include_timing;
  if (!cfg.output.empty()) j["output"] = cfg.output;
  return j;
}

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

/// (metric name, accessor) pairs summarized in the report.
struct Metric {
  const char* name;
  std::optional<double> (*get)(const TrialRecord&);
};

const Metric kMetrics[] = {
    {"re_r", [](const TrialRecord& r) { return r.re_r; }},
    {"re_full", [](const TrialRecord& r) { return r.re_full; }},
    {"accuracy", [](const TrialRecord& r) { return r.accuracy; }},
    {"k_total", [](const TrialRecord& r) { return r.k_total; }},
    {"iterations",
     [](const TrialRecord& r) {
       return r.method == Method::nonconvex && r.error.empty()
                  ? std::optional<double>(static_cast<double>(r.iterations))
                  : std::nullopt;
     }},
};

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::full_rank: return "full_rank";
    case Scenario::extreme_kappa: return "extreme_kappa";
    case Scenario::rank_mismatch_fixed_M: return "rank_mismatch_fixed_M";
    case Scenario::rank_mismatch_fixed_r: return "rank_mismatch_fixed_r";
    case Scenario::kpca_two_spheres: return "kpca_two_spheres";
    case Scenario::custom: return "custom";
  }
  return "unknown";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::nonconvex: return "nonconvex";
    case Method::spectral: return "spectral";
    case Method::nystrom: return "nystrom";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view s) {
  for (auto v : {Scenario::full_rank, Scenario::extreme_kappa, Scenario::rank_mismatch_fixed_M,
                 Scenario::rank_mismatch_fixed_r, Scenario::kpca_two_spheres, Scenario::custom}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown scenario: " + std::string(s));
}

Method parse_method(std::string_view s) {
  for (auto v : {Method::nonconvex, Method::spectral, Method::nystrom}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown method: " + std::string(s));
}

void ExperimentConfig::validate() const {
  if (n < 2) throw std::invalid_argument("experiment: n must be at least 2");
  if (r < 1 || r > n) throw std::invalid_argument("experiment: need 1 <= r <= n");
  if (scenario != Scenario::kpca_two_spheres && !(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("experiment: p must lie in (0, 1]");
  }
  if (trials < 1) throw std::invalid_argument("experiment: trials must be positive");
  if (methods.empty()) throw std::invalid_argument("experiment: no methods");
  if (max_iters < 1 || !(grad_tol >= 0.0)) throw std::invalid_argument("experiment: bad stopping rule");
  if (scenario == Scenario::custom && eigenvalues.empty()) {
    throw std::invalid_argument("experiment: custom scenario needs eigenvalues");
  }
  if (scenario == Scenario::kpca_two_spheres) {
    if (!(gamma > 0.0)) throw std::invalid_argument("experiment: gamma must be positive");
    if (!(p_ratio > 0.0)) throw std::invalid_argument("experiment: p_ratio must be positive");
    if (kmeans_reps < 1) throw std::invalid_argument("experiment: kmeans_reps must be positive");
  }
  const bool wants_nystrom =
      std::find(methods.begin(), methods.end(), Method::nystrom) != methods.end();
  if ((wants_nystrom || scenario == Scenario::kpca_two_spheres) &&
      (columns < r || columns > n)) {
    throw std::invalid_argument("experiment: need r <= columns <= n");
  }
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  const json j = json::parse(json_text);
  if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, v] : j.items()) {
    if (key == "scenario") cfg.scenario = parse_scenario(v.get<std::string>());
    else if (key == "n") cfg.n = v.get<std::size_t>();
    else if (key == "r") cfg.r = v.get<std::size_t>();
    else if (key == "p") cfg.p = v.get<double>();
    else if (key == "sweep") {
      cfg.sweep.clear();
      for (const auto& e : v) cfg.sweep.push_back(sweep_value(e));
    } else if (key == "spectrum") cfg.spectrum = parse_spectrum(v.get<std::string>());
    else if (key == "true_rank") cfg.true_rank = v.get<std::size_t>();
    else if (key == "eigenvalues") cfg.eigenvalues = v.get<std::vector<double>>();
    else if (key == "redraw_eigenvectors") cfg.redraw_eigenvectors = v.get<bool>();
    else if (key == "alpha_mode") cfg.alpha_mode = parse_alpha_mode(v.get<std::string>());
    else if (key == "alpha_scale") cfg.alpha_scale = v.get<double>();
    else if (key == "alpha_value" || key == "alpha") {
      cfg.alpha_value = v.get<double>();
      if (key == "alpha") cfg.alpha_mode = AlphaMode::fixed;
    } else if (key == "lambda_mode") cfg.lambda_mode = parse_lambda_mode(v.get<std::string>());
    else if (key == "spectral_lambda_scale") cfg.spectral_lambda_scale = v.get<double>();
    else if (key == "sqrt_np_lambda_scale") cfg.sqrt_np_lambda_scale = v.get<double>();
    else if (key == "lambda_value" || key == "lambda") {
      cfg.lambda_value = v.get<double>();
      if (key == "lambda") cfg.lambda_mode = LambdaMode::fixed;
    } else if (key == "max_iters") cfg.max_iters = v.get<std::size_t>();
    else if (key == "grad_tol") cfg.grad_tol = v.get<double>();
    else if (key == "compute_k") cfg.compute_k = v.get<bool>();
    else if (key == "gamma") cfg.gamma = v.get<double>();
    else if (key == "columns") cfg.columns = v.get<std::size_t>();
    else if (key == "p_ratio") cfg.p_ratio = v.get<double>();
    else if (key == "kmeans_reps") cfg.kmeans_reps = v.get<std::size_t>();
    else if (key == "kpca_errors") cfg.kpca_errors = v.get<bool>();
    else if (key == "methods") {
      cfg.methods.clear();
      for (const auto& e : v) cfg.methods.push_back(parse_method(e.get<std::string>()));
    } else if (key == "trials") cfg.trials = v.get<std::size_t>();
    else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
    else if (key == "threads") cfg.threads = v.get<std::size_t>();
    else if (key == "include_timing") cfg.include_timing = v.get<bool>();
    else if (key == "output") cfg.output = v.get<std::string>();
    else throw std::invalid_argument("unknown experiment key: " + key);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str());
}

std::vector<Setting> expand_settings(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<double> sweep = cfg.sweep.empty() ? default_sweep(cfg.scenario) : cfg.sweep;
  std::vector<Setting> out;
  switch (cfg.scenario) {
    case Scenario::full_rank:
      for (double s5 : sweep) {
        Setting s{"sigma5=" + format_number(s5), s5, cfg.r, {10, 10, 10, 10, s5}};
        s.eigenvalues.resize(std::max<std::size_t>(cfg.n, 5), 1.0);
        s.eigenvalues.resize(cfg.n);
        out.push_back(std::move(s));
      }
      break;
    case Scenario::extreme_kappa:
      for (double kappa : sweep) {
        if (!(kappa > 0.0)) throw std::invalid_argument("experiment: kappa must be positive");
        const double s5 = std::isinf(kappa) ? 0.0 : 10.0 / kappa;
        out.push_back({"kappa=" + format_number(kappa), kappa, cfg.r, {10, 10, 10, 10, s5}});
      }
      break;
    case Scenario::rank_mismatch_fixed_M:
      for (double rv : sweep) {
        const std::size_t r = as_count(rv, "rank");
        out.push_back({"r=" + format_number(rv), rv, r,
                       low_rank_spectrum(cfg.spectrum, cfg.true_rank, true)});
      }
      break;
    case Scenario::rank_mismatch_fixed_r:
      for (double rv : sweep) {
        const std::size_t rank = as_count(rv, "true rank");
        out.push_back({"R=" + format_number(rv), rv, cfg.r,
                       low_rank_spectrum(cfg.spectrum, rank, false)});
      }
      break;
    case Scenario::kpca_two_spheres:
      out.push_back({"kpca", 0.0, cfg.r, {}});
      break;
    case Scenario::custom:
      out.push_back({"custom", 0.0, cfg.r, cfg.eigenvalues});
      break;
  }
  for (const Setting& s : out) {
    if (s.rank < 1 || s.rank > cfg.n) throw std::invalid_argument("experiment: rank out of range");
    if (s.eigenvalues.size() > cfg.n) throw std::invalid_argument("experiment: spectrum longer than n");
  }
  return out;
}

std::vector<const TrialRecord*> RunReport::select(std::size_t setting, Method method) const {
  std::vector<const TrialRecord*> out;
  for (const TrialRecord& t : trials) {
    if (t.setting == setting && t.method == method) out.push_back(&t);
  }
  return out;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  RunReport report;
  report.config = cfg;
  report.settings = expand_settings(cfg);
  const std::size_t ns = report.settings.size();

  Shared shared;
  shared.settings.resize(ns);
  if (cfg.scenario == Scenario::kpca_two_spheres) {
    shared.data = gen_two_spheres(cfg.n, derive_seed(cfg.seed, 0xDA7A));
    shared.kernel = KernelSpec::radial(cfg.gamma);
    shared.p_trial = nystrom_sampling_rate(cfg.n, cfg.columns) / cfg.p_ratio;
    if (cfg.kpca_errors) {
      SettingData& sd = shared.settings[0];
      const auto nn = static_cast<Eigen::Index>(cfg.n);
      sd.full.resize(nn, nn);
      for (Eigen::Index i = 0; i < nn; ++i) {
        for (Eigen::Index j = 0; j < nn; ++j) {
          sd.full(i, j) = kernel_entry(shared.kernel, *shared.data, static_cast<std::size_t>(i),
                                       static_cast<std::size_t>(j));
        }
      }
      sd.truncated = dense_top_part(sd.full, cfg.r);
    }
  } else {
    shared.p_trial = cfg.p;
    std::optional<Eigen::MatrixXd> common;
    for (std::size_t s = 0; s < ns; ++s) {
      const Setting& setting = report.settings[s];
      Eigen::MatrixXd q;
      if (cfg.redraw_eigenvectors) {
        q = haar_orthogonal(cfg.n, derive_seed(cfg.seed, 0xE16, s + 1));
      } else {
        if (!common) common = haar_orthogonal(cfg.n, derive_seed(cfg.seed, 0xE16));
        q = *common;
      }
      Eigen::VectorXd sigma = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cfg.n));
      for (std::size_t k = 0; k < setting.eigenvalues.size(); ++k) {
        sigma(static_cast<Eigen::Index>(k)) = setting.eigenvalues[k];
      }
      SettingData& sd = shared.settings[s];
      sd.truth.emplace(std::move(sigma), std::move(q));
      sd.full = sd.truth->dense();
      sd.truncated = sd.truth->dense_truncated(setting.rank);
    }
  }

  const std::size_t nm = cfg.methods.size();
  const std::size_t jobs = ns * cfg.trials;
  report.trials.resize(jobs * nm);
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const std::size_t s = job / cfg.trials;
      const std::size_t t = job % cfg.trials;
      run_trial(cfg, report.settings[s], shared.settings[s], shared, s, t,
                report.trials.data() + job * nm);
    }
  };
  std::size_t threads = cfg.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  report.seconds = seconds_since(start);
  return report;
}

Quantiles quantiles(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("quantiles: empty input");
  std::sort(values.begin(), values.end());
  const auto at = [&](double q) {
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {values.front(), at(0.25), at(0.5), at(0.75), values.back(), values.size()};
}

namespace {

template <class F>
void for_each_summary(const RunReport& report, F&& f) {
  for (std::size_t s = 0; s < report.settings.size(); ++s) {
    for (Method m : report.config.methods) {
      const auto recs = report.select(s, m);
      for (const Metric& metric : kMetrics) {
        std::vector<double> vals;
        for (const TrialRecord* rec : recs) {
          if (!rec->error.empty()) continue;
          if (auto v = metric.get(*rec)) vals.push_back(*v);
        }
        if (!vals.empty()) f(s, m, metric.name, quantiles(std::move(vals)));
      }
    }
  }
}

}  // namespace

std::string report_to_json(const RunReport& report) {
  json out;
  out["config"] = config_to_json(report.config);
  out["settings"] = json::array();
  for (const Setting& s : report.settings) {
    json js;
    js["label"] = s.label;
    js["value"] = sweep_json(s.value);
    js["rank"] = s.rank;
    // The tail of the spectrum is constant; keep the echo short.
    const std::size_t shown = std::min<std::size_t>(s.eigenvalues.size(), 32);
    js["leading_eigenvalues"] =
        std::vector<double>(s.eigenvalues.begin(), s.eigenvalues.begin() + static_cast<std::ptrdiff_t>(shown));
    out["settings"].push_back(std::move(js));
  }
  out["trials"] = json::array();
  std::size_t errors = 0;
  for (const TrialRecord& t : report.trials) {
    json jt;
    jt["setting"] = t.setting;
    jt["trial"] = t.trial;
    jt["method"] = std::string(to_string(t.method));
    put_optional(jt, "re_r", t.re_r);
    put_optional(jt, "re_full", t.re_full);
    put_optional(jt, "accuracy", t.accuracy);
    if (t.method == Method::nonconvex && t.error.empty()) {
      jt["iterations"] = t.iterations;
      jt["termination"] = t.termination;
    }
    put_optional(jt, "f_value", t.f_value);
    put_optional(jt, "grad_norm", t.grad_norm);
    put_optional(jt, "k_total", t.k_total);
    put_optional(jt, "k_identity_gap", t.k_identity_gap);
    jt["p_effective"] = t.p_effective;
    jt["storage_entries"] = t.storage_entries;
    if (report.config.include_timing) jt["seconds"] = t.seconds;
    if (!t.error.empty()) {
      jt["error"] = t.error;
      ++errors;
    }
    out["trials"].push_back(std::move(jt));
  }
  out["summary"] = json::array();
  for_each_summary(report, [&](std::size_t s, Method m, const char* metric, const Quantiles& q) {
    out["summary"].push_back({{"setting", report.settings[s].label},
                              {"method", std::string(to_string(m))},
                              {"metric", metric},
                              {"count", q.count},
                              {"min", q.min},
                              {"q1", q.q1},
                              {"median", q.median},
                              {"q3", q.q3},
                              {"max", q.max}});
  });
  out["errors"] = errors;
  if (report.config.include_timing) out["seconds"] = report.seconds;
  return out.dump(2);
}

std::string report_to_csv(const RunReport& report) {
  std::ostringstream out;
  out.precision(10);
  out << "setting,value,method,metric,count,min,q1,median,q3,max\n";
  for_each_summary(report, [&](std::size_t s, Method m, const char* metric, const Quantiles& q) {
    out << report.settings[s].label << ',' << format_number(report.settings[s].value) << ','
        << to_string(m) << ',' << metric << ',' << q.count << ',' << q.min << ',' << q.q1 << ','
        << q.median << ',' << q.q3 << ',' << q.max << '\n';
  });
  return out.str();
}

}  // namespace psdc
