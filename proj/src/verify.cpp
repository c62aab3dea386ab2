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

#include "psdc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

#include "json.hpp"
#include "psdc/data_model.hpp"
#include "psdc/metrics.hpp"
#include "psdc/objective.hpp"
#include "psdc/rng.hpp"
#include "psdc/sampling.hpp"
#include "psdc/theory_lab.hpp"

namespace psdc {
namespace {

Eigen::MatrixXd normal_matrix(CounterRng& rng, std::size_t rows, std::size_t cols, double scale) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = scale * rng.normal();
  }
  return a;
}

std::size_t draw_between(CounterRng& rng, std::size_t lo, std::size_t hi) {
  return lo + rng.uniform_index(hi - lo + 1);
}

struct BoundInstance {
  Eigen::MatrixXd omega, a, b, c, d;
  double t = 0.0;
};

BoundInstance draw_bound_instance(std::uint64_t seed) {
  CounterRng rng(seed);
  const std::size_t n1 = draw_between(rng, 1, 8);
  const std::size_t n2 = draw_between(rng, 1, 8);
  const std::size_t r1 = draw_between(rng, 1, 3);
  const std::size_t r2 = draw_between(rng, 1, 3);
  BoundInstance inst;
  inst.t = -1.0 + 3.0 * rng.uniform();
  const double density = rng.uniform();
  inst.omega.resize(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2));
  for (Eigen::Index i = 0; i < inst.omega.rows(); ++i) {
    for (Eigen::Index j = 0; j < inst.omega.cols(); ++j) {
      inst.omega(i, j) = rng.uniform() < density ? 1.0 : 0.0;
    }
  }
  // Mixed scales so that both tiny and large products show up.
  const double scale = std::pow(10.0, -1.0 + 2.0 * rng.uniform());
  inst.a = normal_matrix(rng, n1, r1, scale);
  inst.b = normal_matrix(rng, n1, r2, scale);
  inst.c = normal_matrix(rng, n2, r1, scale);
  inst.d = normal_matrix(rng, n2, r2, scale);
  return inst;
}

ObjectiveParams draw_params(CounterRng& rng, const Factor& x, bool lambda_on) {
  const Eigen::VectorXd norms = x.values().rowwise().norm();
  ObjectiveParams params;
  params.lambda = lambda_on ? std::pow(10.0, -1.0 + 2.0 * rng.uniform()) : 0.0;
  // Put alpha in the widest gap between sorted row norms (or below/above them all) so
  // that no row sits within 20% of the shell.
  std::vector<double> sorted(norms.data(), norms.data() + norms.size());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> candidates;
  candidates.push_back(sorted.front() / 1.5);
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i + 1] > 1.5 * sorted[i]) candidates.push_back(std::sqrt(sorted[i] * sorted[i + 1]));
  }
  candidates.push_back(sorted.back() * 1.5);
  params.alpha = candidates[rng.uniform_index(candidates.size())];
  if (!(params.alpha > 0.0)) params.alpha = 1.0;
  return params;
}

Factor draw_factor(CounterRng& rng, std::size_t n, std::size_t r) {
  RowMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    // Per-row scale spreads the row norms so alpha can sit between them.
    const double scale = std::pow(10.0, -0.5 + rng.uniform());
    for (Eigen::Index k = 0; k < x.cols(); ++k) x(i, k) = scale * rng.normal();
  }
  return Factor(std::move(x));
}

}  // namespace

std::string_view to_string(Suite suite) {
  switch (suite) {
    case Suite::lemma_concern: return "lemma-concern";
    case Suite::hadamard: return "hadamard";
    case Suite::k_identity: return "k-identity";
    case Suite::gradients: return "gradients";
  }
  return "unknown";
}

Suite parse_suite(std::string_view name) {
  for (Suite s : all_suites()) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown suite: " + std::string(name));
}

std::vector<Suite> all_suites() {
  return {Suite::lemma_concern, Suite::hadamard, Suite::k_identity, Suite::gradients};
}

DerivativeCheck check_derivatives_instance(std::uint64_t seed) {
  CounterRng rng(seed);
  const std::size_t n = draw_between(rng, 3, 12);
  const std::size_t r = draw_between(rng, 1, 3);
  const double p = 0.2 + 0.8 * rng.uniform();
  const Mask mask = sample_mask(n, p, rng.next_u64());
  std::vector<double> values(mask.pair_count());
  for (double& v : values) v = rng.normal();
  const SampledMatrix m(mask.shared_pattern(), std::move(values), p);
  const Factor x = draw_factor(rng, n, r);
  const ObjectiveParams params = draw_params(rng, x, rng.uniform() < 0.75);

  DerivativeCheck out;
  const Factor grad = f_grad(x, m, params);
  RowMatrix fd(grad.values().rows(), grad.values().cols());
  const double h = 1e-5;
  for (Eigen::Index i = 0; i < fd.rows(); ++i) {
    for (Eigen::Index k = 0; k < fd.cols(); ++k) {
      RowMatrix plus = x.values();
      RowMatrix minus = x.values();
      const double step = h * std::max(1.0, std::abs(x.values()(i, k)));
      plus(i, k) += step;
      minus(i, k) -= step;
      fd(i, k) = (f_value(Factor(plus), m, params) - f_value(Factor(minus), m, params)) / (2.0 * step);
    }
  }
  const double gnorm = grad.values().norm();
  out.grad_rel_error = (fd - grad.values()).norm() / std::max(gnorm, 1e-12);

  const Factor dir(RowMatrix(normal_matrix(rng, n, r, 1.0)));
  const double hq = 1e-5 * std::max(1.0, x.values().norm()) / std::max(1.0, dir.values().norm());
  const Factor xp(RowMatrix(x.values() + hq * dir.values()));
  const Factor xm(RowMatrix(x.values() - hq * dir.values()));
  const double fd_quad =
      frobenius_inner(Factor(RowMatrix(f_grad(xp, m, params).values() - f_grad(xm, m, params).values())), dir) /
      (2.0 * hq);
  const double quad = f_hess_quadform(x, dir, m, params);
  // The residual cross term can cancel the PSD part of the quadratic form; normalize by
  // the sum of the magnitudes of the two so a near-zero total does not blow up the ratio.
  const SparseResidual res = residual(x, m);
  double cross = 0.0;
  m.for_each_pair([&](std::size_t i, std::size_t j, double, std::size_t k) {
    cross += 4.0 * res.values[k] * dir.row(i).dot(dir.row(j));
  });
  const double scale = std::max(std::abs(quad) + 2.0 * std::abs(cross), 1e-12);
  out.hess_rel_error = std::abs(fd_quad - quad) / scale;
  return out;
}

double k_identity_instance(std::uint64_t seed) {
  CounterRng rng(seed);
  const std::size_t n = draw_between(rng, 4, 16);
  const std::size_t r = draw_between(rng, 1, std::min<std::size_t>(4, n - 1));
  const double p = 0.2 + 0.8 * rng.uniform();
  // Spectrum: r leading values plus a random-length tail, sorted.
  std::vector<double> sigma;
  const std::size_t rank = draw_between(rng, r, n);
  for (std::size_t k = 0; k < rank; ++k) sigma.push_back(std::pow(10.0, -1.0 + 2.0 * rng.uniform()));
  std::sort(sigma.rbegin(), sigma.rend());
  const GroundTruth truth = gen_psd(n, sigma, rng.next_u64());
  const Mask mask = sample_mask(n, p, rng.next_u64());
  const SampledMatrix m = sample_truth(truth, mask);
  // X either near U_r (the regime of interest) or arbitrary.
  Factor x = draw_factor(rng, n, r);
  if (rng.uniform() < 0.5) {
    const double eps = std::pow(10.0, -3.0 + 3.0 * rng.uniform());
    x = Factor(RowMatrix(truth.factor(r).values() + eps * x.values()));
  }
  const ObjectiveParams params = draw_params(rng, x, rng.uniform() < 0.75);
  return k_value(x, m, params, truth, r).identity_gap();
}

SuiteReport run_suite(Suite suite, std::size_t instances, std::uint64_t seed) {
  SuiteReport report;
  report.suite = suite;
  report.instances = instances;
  const auto start = std::chrono::steady_clock::now();
  const auto suite_id = static_cast<std::uint64_t>(suite);
  for (std::size_t t = 0; t < instances; ++t) {
    const std::uint64_t inst_seed = derive_seed(seed, suite_id, t);
    double stat = 0.0;
    bool ok = true;
    switch (suite) {
      case Suite::lemma_concern: {
        const BoundInstance in = draw_bound_instance(inst_seed);
        const BoundCheck c = check_lemma_concern(in.omega, in.t, in.a, in.b, in.c, in.d);
        stat = c.lhs - c.rhs;
        ok = c.holds;
        break;
      }
      case Suite::hadamard: {
        const BoundInstance in = draw_bound_instance(inst_seed);
        const BoundCheck c = hadamard_nuclear_bound(in.a, in.b, in.c, in.d);
        stat = c.lhs - c.rhs;
        ok = c.holds;
        break;
      }
      case Suite::k_identity:
        stat = k_identity_instance(inst_seed);
        ok = stat <= kIdentityTol;
        break;
      case Suite::gradients: {
        const DerivativeCheck c = check_derivatives_instance(inst_seed);
        stat = std::max(c.grad_rel_error, c.hess_rel_error);
        ok = c.grad_rel_error < kGradTol && c.hess_rel_error < kHessTol;
        break;
      }
    }
    if (t == 0 || stat > report.worst) report.worst = stat;
    if (!ok) {
      if (report.failures == 0) report.first_failure = t;
      ++report.failures;
    }
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string verify_report_json(const std::vector<SuiteReport>& reports, std::size_t instances,
                               std::uint64_t seed) {
  nlohmann::json out;
  out["seed"] = seed;
  out["instances"] = instances;
  bool all = true;
  out["suites"] = nlohmann::json::array();
  for (const SuiteReport& r : reports) {
    nlohmann::json s;
    s["suite"] = std::string(to_string(r.suite));
    s["instances"] = r.instances;
    s["passed_count"] = r.instances - r.failures;
    s["failed_count"] = r.failures;
    s["worst"] = r.worst;
    if (r.failures > 0) s["first_failure"] = r.first_failure;
    s["seconds"] = r.seconds;
    s["passed"] = r.passed();
    all = all && r.passed();
    out["suites"].push_back(std::move(s));
  }
  out["passed"] = all;
  return out.dump(2);
}

}  // namespace psdc
