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

// Command-line driver: completion of a sampled matrix, kernel PCA from a sparse kernel
// sample, the Nystrom baseline, batch experiments and the randomized verifiers.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "psdc/baselines.hpp"
#include "psdc/data_model.hpp"
#include "psdc/experiment.hpp"
#include "psdc/kernels.hpp"
#include "psdc/metrics.hpp"
#include "psdc/optimizer.hpp"
#include "psdc/sampling.hpp"
#include "psdc/verify.hpp"

namespace {

using nlohmann::json;

struct TuningArgs {
  std::optional<double> alpha;
  std::optional<double> lambda;
  std::uint64_t seed = 0;
  std::size_t max_iters = 1000;
  double grad_tol = 1e-3;
};

void add_tuning(CLI::App* cmd, TuningArgs& t) {
  cmd->add_option("--alpha", t.alpha, "Regularizer radius (default 100 sqrt(max |M_ij|))");
  cmd->add_option("--lambda", t.lambda, "Regularizer weight (default 100 ||Omega - pJ||)");
  cmd->add_option("--seed", t.seed, "Seed for the random initialization");
  cmd->add_option("--max-iters", t.max_iters, "Iteration cap");
  cmd->add_option("--grad-tol", t.grad_tol, "Stop once ||grad f||_F falls below this");
}

psdc::SolveConfig solve_config(const TuningArgs& t, std::size_t rank) {
  psdc::SolveConfig cfg;
  cfg.rank = rank;
  cfg.init_seed = t.seed;
  cfg.max_iters = t.max_iters;
  cfg.grad_tol = t.grad_tol;
  if (t.alpha) {
    cfg.alpha_mode = psdc::AlphaMode::fixed;
    cfg.alpha_value = *t.alpha;
  }
  if (t.lambda) {
    cfg.lambda_mode = psdc::LambdaMode::fixed;
    cfg.lambda_value = *t.lambda;
  }
  return cfg;
}

struct KernelArgs {
  std::string family = "radial";
  double gamma = 1.0;
  int degree = 2;
  double offset = 1.0;
};

void add_kernel(CLI::App* cmd, KernelArgs& k) {
  cmd->add_option("--kernel", k.family, "radial | polynomial | linear")
      ->check(CLI::IsMember({"radial", "polynomial", "linear"}));
  cmd->add_option("--gamma", k.gamma, "Radial kernel exp(-gamma ||x - y||^2)");
  cmd->add_option("--degree", k.degree, "Polynomial degree");
  cmd->add_option("--offset", k.offset, "Polynomial offset");
}

psdc::KernelSpec kernel_spec(const KernelArgs& k) {
  psdc::KernelSpec spec = k.family == "radial"       ? psdc::KernelSpec::radial(k.gamma)
                          : k.family == "polynomial" ? psdc::KernelSpec::polynomial(k.degree, k.offset)
                                                     : psdc::KernelSpec::linear();
  spec.validate();
  return spec;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (int l : labels) out << l << '\n';
}

json trace_summary(const psdc::SolveTrace& trace) {
  json j;
  j["iterations"] = trace.steps();
  j["termination"] = std::string(psdc::to_string(trace.reason));
  j["alpha"] = trace.params.alpha;
  j["lambda"] = trace.params.lambda;
  if (!trace.iterations.empty()) {
    j["f_value"] = trace.iterations.back().f_value;
    j["grad_norm"] = trace.iterations.back().grad_norm;
  }
  return j;
}

/// k-means on the factor rows; adds the accuracy when the dataset carries labels.
void cluster_report(const psdc::Factor& x, const psdc::Dataset& data, std::size_t clusters,
                    std::size_t reps, std::uint64_t seed, const std::string& labels_path,
                    json& summary) {
  const psdc::KMeansResult km = psdc::kmeans_rows(x, clusters, reps, seed);
  write_labels(labels_path, km.labels);
  summary["labels"] = labels_path;
  summary["wcss"] = km.wcss;
  if (data.labels() && clusters == 2) {
    summary["accuracy"] = psdc::clustering_accuracy(km.labels, *data.labels());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"psdc: PSD matrix completion and memory-efficient kernel PCA"};
  app.require_subcommand(1);

  // complete
  auto* complete = app.add_subcommand("complete", "Factor a sampled symmetric matrix");
  std::string matrix_path, factor_out, trace_out;
  std::size_t rank = 0;
  TuningArgs complete_tuning;
  complete->add_option("matrix-file", matrix_path, "Sampled matrix (\"n nnz\" then \"i j value\")")
      ->required();
  complete->add_option("--rank,-r", rank, "Factor rank")->required();
  complete->add_option("--output,-o", factor_out, "Factor file (default <matrix-file>.factor)");
  complete->add_option("--trace", trace_out, "Trace JSONL (default <matrix-file>.trace.jsonl)");
  add_tuning(complete, complete_tuning);

  // kpca
  auto* kpca = app.add_subcommand("kpca", "Kernel PCA from a sparse sample of the kernel matrix");
  std::string kpca_data, kpca_out;
  std::size_t kpca_rank = 2, kpca_clusters = 2, kpca_reps = 20;
  double sample_rate = 0.0;
  std::uint64_t mask_seed = 1;
  KernelArgs kpca_kernel;
  TuningArgs kpca_tuning;
  kpca->add_option("dataset", kpca_data, "Dataset file (\"n d [has_labels]\")")->required();
  kpca->add_option("--rank,-r", kpca_rank, "Factor rank")->required();
  kpca->add_option("--sample-rate,-p", sample_rate, "Pair sampling probability")->required();
  kpca->add_option("--mask-seed", mask_seed, "Seed for the sampled pairs");
  kpca->add_option("--clusters", kpca_clusters, "k for k-means on the factor rows");
  kpca->add_option("--kmeans-reps", kpca_reps, "k-means repetitions");
  kpca->add_option("--output,-o", kpca_out, "Output prefix (default <dataset>)");
  add_kernel(kpca, kpca_kernel);
  add_tuning(kpca, kpca_tuning);

  // nystrom
  auto* nys = app.add_subcommand("nystrom", "Nystrom approximation from sampled columns");
  std::string nys_data, nys_out;
  std::size_t columns = 50, nys_rank = 2, nys_clusters = 2, nys_reps = 20;
  std::uint64_t nys_seed = 1;
  KernelArgs nys_kernel;
  nys->add_option("dataset", nys_data, "Dataset file")->required();
  nys->add_option("--columns,-c", columns, "Number of sampled columns")->required();
  nys->add_option("--rank,-r", nys_rank, "Factor rank")->required();
  nys->add_option("--seed", nys_seed, "Seed for the column choice and k-means");
  nys->add_option("--clusters", nys_clusters, "k for k-means on the factor rows");
  nys->add_option("--kmeans-reps", nys_reps, "k-means repetitions");
  nys->add_option("--output,-o", nys_out, "Output prefix (default <dataset>.nystrom)");
  add_kernel(nys, nys_kernel);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a batch experiment from a JSON config");
  std::string exp_config, exp_out;
  std::optional<std::size_t> exp_threads;
  exp->add_option("config", exp_config, "Experiment config (JSON)")->required();
  exp->add_option("--output,-o", exp_out, "Output prefix (overrides the config)");
  exp->add_option("--threads", exp_threads, "Worker threads (0: hardware concurrency)");

  // verify
  auto* ver = app.add_subcommand("verify", "Randomized checks of the analysis inequalities and derivatives");
  std::vector<std::string> suites;
  std::size_t instances = 1000;
  std::uint64_t ver_seed = 1;
  ver->add_option("--suite", suites, "lemma-concern | hadamard | k-identity | gradients (repeatable)")
      ->check(CLI::IsMember({"lemma-concern", "hadamard", "k-identity", "gradients"}));
  ver->add_option("--instances,-n", instances, "Instances per suite");
  ver->add_option("--seed", ver_seed, "Base seed");

  // gen-spheres
  auto* spheres = app.add_subcommand("gen-spheres", "Write a two-sphere dataset");
  std::size_t sphere_n = 2000;
  std::uint64_t sphere_seed = 1;
  std::string sphere_out;
  spheres->add_option("--n", sphere_n, "Number of points");
  spheres->add_option("--seed", sphere_seed, "Seed");
  spheres->add_option("--output,-o", sphere_out, "Dataset file")->required();

  // gen-matrix
  auto* genm = app.add_subcommand("gen-matrix", "Sample a synthetic PSD matrix on a random pair set");
  std::size_t gen_n = 100;
  std::vector<double> gen_eigs{10, 10};
  double gen_p = 0.3;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  genm->add_option("--n", gen_n, "Dimension");
  genm->add_option("--eigenvalues", gen_eigs, "Leading eigenvalues (rest zero)");
  genm->add_option("--p", gen_p, "Pair sampling probability");
  genm->add_option("--seed", gen_seed, "Seed for eigenvectors and pairs");
  genm->add_option("--output,-o", gen_out, "Sampled matrix file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*complete) {
      const psdc::SampledMatrix m = psdc::load_sampled(matrix_path);
      const psdc::SolveResult res = psdc::solve(m, solve_config(complete_tuning, rank));
      if (factor_out.empty()) factor_out = matrix_path + ".factor";
      if (trace_out.empty()) trace_out = matrix_path + ".trace.jsonl";
      psdc::save_factor(res.x, factor_out);
      write_text(trace_out, psdc::trace_to_jsonl(res.trace));
      json summary = trace_summary(res.trace);
      summary["factor"] = factor_out;
      summary["trace"] = trace_out;
      std::cout << summary.dump(2) << '\n';
      return 0;
    }
    if (*kpca) {
      const psdc::Dataset data = psdc::load_dataset(kpca_data);
      const psdc::KernelSpec spec = kernel_spec(kpca_kernel);
      const psdc::Mask mask = psdc::sample_mask(data.n(), sample_rate, mask_seed);
      const psdc::SampledMatrix m = psdc::build_sampled_kernel(data, spec, mask);
      const psdc::SolveResult res = psdc::solve(m, solve_config(kpca_tuning, kpca_rank));
      const std::string prefix = kpca_out.empty() ? kpca_data : kpca_out;
      psdc::save_factor(res.x, prefix + ".factor");
      json summary = trace_summary(res.trace);
      summary["factor"] = prefix + ".factor";
      summary["pairs"] = m.pair_count();
      cluster_report(res.x, data, kpca_clusters, kpca_reps, kpca_tuning.seed, prefix + ".labels",
                     summary);
      std::cout << summary.dump(2) << '\n';
      return 0;
    }
    if (*nys) {
      const psdc::Dataset data = psdc::load_dataset(nys_data);
      const psdc::KernelSpec spec = kernel_spec(nys_kernel);
      const psdc::Factor x = psdc::nystrom(
          [&](std::size_t i, std::size_t j) { return psdc::kernel_entry(spec, data, i, j); },
          data.n(), columns, nys_rank, nys_seed);
      const std::string prefix = nys_out.empty() ? nys_data + ".nystrom" : nys_out;
      psdc::save_factor(x, prefix + ".factor");
      json summary;
      summary["factor"] = prefix + ".factor";
      summary["sampling_rate"] = psdc::nystrom_sampling_rate(data.n(), columns);
      cluster_report(x, data, nys_clusters, nys_reps, nys_seed, prefix + ".labels", summary);
      std::cout << summary.dump(2) << '\n';
      return 0;
    }
    if (*exp) {
      psdc::ExperimentConfig cfg = psdc::load_experiment_config(exp_config);
      if (!exp_out.empty()) cfg.output = exp_out;
      if (exp_threads) cfg.threads = *exp_threads;
      const psdc::RunReport report = psdc::run_experiment(cfg);
      const std::string prefix = cfg.output.empty() ? exp_config + ".out" : cfg.output;
      write_text(prefix + ".json", psdc::report_to_json(report));
      write_text(prefix + ".csv", psdc::report_to_csv(report));
      std::cout << psdc::report_to_csv(report);
      std::cerr << "wrote " << prefix << ".json and " << prefix << ".csv\n";
      return 0;
    }
    if (*ver) {
      std::vector<psdc::Suite> chosen;
      for (const auto& s : suites) chosen.push_back(psdc::parse_suite(s));
      if (chosen.empty()) chosen = psdc::all_suites();
      std::vector<psdc::SuiteReport> reports;
      bool ok = true;
      for (psdc::Suite s : chosen) {
        reports.push_back(psdc::run_suite(s, instances, ver_seed));
        ok = ok && reports.back().passed();
      }
      std::cout << psdc::verify_report_json(reports, instances, ver_seed) << '\n';
      return ok ? 0 : 2;
    }
    if (*spheres) {
      psdc::save_dataset(psdc::gen_two_spheres(sphere_n, sphere_seed), sphere_out);
      return 0;
    }
    if (*genm) {
      const psdc::GroundTruth truth = psdc::gen_psd(gen_n, gen_eigs, gen_seed);
      const psdc::Mask mask = psdc::sample_mask(gen_n, gen_p, gen_seed + 1);
      psdc::save_sampled(psdc::sample_truth(truth, mask), gen_out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
