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

#include "psdc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/QR>

#include "psdc/rng.hpp"

namespace psdc {

Eigen::MatrixXd haar_orthogonal(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("haar_orthogonal: n must be positive");
  const auto nn = static_cast<Eigen::Index>(n);
  CounterRng rng(seed);
  Eigen::MatrixXd g(nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    for (Eigen::Index j = 0; j < nn; ++j) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < nn; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

GroundTruth gen_psd(std::size_t n, const std::vector<double>& eigenvalues, std::uint64_t seed) {
  if (eigenvalues.size() > n) throw std::invalid_argument("gen_psd: more eigenvalues than n");
  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    if (!(eigenvalues[k] >= 0.0)) throw std::invalid_argument("gen_psd: negative eigenvalue");
    if (k > 0 && eigenvalues[k] > eigenvalues[k - 1]) {
      throw std::invalid_argument("gen_psd: eigenvalues must be nonincreasing");
    }
    sigma(static_cast<Eigen::Index>(k)) = eigenvalues[k];
  }
  return GroundTruth(std::move(sigma), haar_orthogonal(n, seed));
}

SampledMatrix sample_dense(const Eigen::MatrixXd& m, const Mask& mask) {
  const auto n = static_cast<Eigen::Index>(mask.n());
  if (m.rows() != n || m.cols() != n) throw std::invalid_argument("sample_dense: shape mismatch");
  std::vector<double> values(mask.pair_count());
  mask.pattern().for_each_pair([&](std::size_t i, std::size_t j, std::size_t k) {
    values[k] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
  return SampledMatrix(mask.shared_pattern(), std::move(values), mask.p_nominal());
}

SampledMatrix sample_truth(const GroundTruth& truth, const Mask& mask) {
  if (truth.n() != mask.n()) throw std::invalid_argument("sample_truth: size mismatch");
  return sample_dense(truth.dense(), mask);
}

double rel_error(const Factor& approx, const Eigen::MatrixXd& reference) {
  const auto n = static_cast<Eigen::Index>(approx.n());
  if (reference.rows() != n || reference.cols() != n) {
    throw std::invalid_argument("rel_error: shape mismatch");
  }
  const double denom = reference.norm();
  if (!(denom > 0.0)) throw std::invalid_argument("rel_error: zero reference");
  const Eigen::MatrixXd x = approx.values();
  Eigen::MatrixXd diff = -reference;
  diff.selfadjointView<Eigen::Lower>().rankUpdate(x);
  diff.triangularView<Eigen::StrictlyUpper>() = diff.transpose();
  return diff.norm() / denom;
}

namespace {

/// ||R S R'||_F for [A B] = QR, S = diag(I_a, -sign I_b).
double gram_difference_norm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double sign) {
  const auto ra = a.cols();
  const auto rb = b.cols();
  Eigen::MatrixXd z(a.rows(), ra + rb);
  z << a, b;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  const auto k = std::min(z.rows(), z.cols());
  const Eigen::MatrixXd r =
      qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  Eigen::VectorXd s = Eigen::VectorXd::Ones(ra + rb);
  s.tail(rb).setConstant(-sign);
  return (r * s.asDiagonal() * r.transpose()).norm();
}

}  // namespace

double rel_error(const Factor& approx, const Factor& reference_factor) {
  if (approx.n() != reference_factor.n()) throw std::invalid_argument("rel_error: shape mismatch");
  const Eigen::MatrixXd y = reference_factor.values();
  const Eigen::MatrixXd empty(y.rows(), 0);
  const double denom = gram_difference_norm(y, empty, 1.0);
  if (!(denom > 0.0)) throw std::invalid_argument("rel_error: zero reference");
  return gram_difference_norm(approx.values(), y, 1.0) / denom;
}

namespace {

struct LloydRun {
  std::vector<int> labels;
  Eigen::MatrixXd centers;
  double wcss = 0.0;
  std::size_t iterations = 0;
};

Eigen::MatrixXd kmeanspp_seed(const RowMatrix& x, std::size_t k, CounterRng& rng) {
  const auto n = x.rows();
  Eigen::MatrixXd centers(static_cast<Eigen::Index>(k), x.cols());
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  auto first = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::size_t>(n)));
  centers.row(0) = x.row(first);
  chosen[static_cast<std::size_t>(first)] = true;
  Eigen::VectorXd dist = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (std::size_t c = 1; c < k; ++c) {
    const double total = dist.sum();
    Eigen::Index pick = -1;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (dist(i) <= 0.0) continue;
        pick = i;
        target -= dist(i);
        if (target < 0.0) break;
      }
    } else {
      // All remaining points coincide with a center: take an unused index.
      std::vector<Eigen::Index> unused;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!chosen[static_cast<std::size_t>(i)]) unused.push_back(i);
      }
      pick = unused[rng.uniform_index(unused.size())];
    }
    chosen[static_cast<std::size_t>(pick)] = true;
    const auto cc = static_cast<Eigen::Index>(c);
    centers.row(cc) = x.row(pick);
    dist = dist.cwiseMin((x.rowwise() - centers.row(cc)).rowwise().squaredNorm());
  }
  return centers;
}

LloydRun lloyd(const RowMatrix& x, Eigen::MatrixXd centers, std::size_t max_iters) {
  const auto n = x.rows();
  const auto k = centers.rows();
  LloydRun run;
  run.labels.assign(static_cast<std::size_t>(n), -1);
  Eigen::VectorXd best(n);
  for (std::size_t it = 0; it < max_iters; ++it) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index arg = 0;
      const double d = (centers.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&arg);
      best(i) = d;
      if (run.labels[static_cast<std::size_t>(i)] != static_cast<int>(arg)) {
        run.labels[static_cast<std::size_t>(i)] = static_cast<int>(arg);
        changed = true;
      }
    }
    run.iterations = it + 1;
    if (!changed && it > 0) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto c = run.labels[static_cast<std::size_t>(i)];
      sums.row(c) += x.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Empty cluster: move it to the point farthest from its center.
        Eigen::Index far = 0;
        best.maxCoeff(&far);
        centers.row(c) = x.row(far);
        best(far) = 0.0;
      }
    }
  }
  run.wcss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    run.wcss += (x.row(i) - centers.row(run.labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  run.centers = std::move(centers);
  return run;
}

}  // namespace

KMeansResult kmeans_rows(const Factor& x, std::size_t k, std::size_t reps, std::uint64_t seed,
                         std::size_t max_iters) {
  if (k < 1 || k > x.n()) throw std::invalid_argument("kmeans_rows: need 1 <= k <= n");
  if (reps < 1) throw std::invalid_argument("kmeans_rows: reps must be positive");
  KMeansResult out;
  out.wcss = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < reps; ++t) {
    CounterRng rng(derive_seed(seed, t));
    LloydRun run = lloyd(x.values(), kmeanspp_seed(x.values(), k, rng), max_iters);
    if (run.wcss < out.wcss) {
      out.labels = std::move(run.labels);
      out.centers = std::move(run.centers);
      out.wcss = run.wcss;
      out.iterations = run.iterations;
    }
  }
  return out;
}

double clustering_accuracy(const std::vector<int>& labels, const std::vector<int>& truth) {
  if (labels.size() != truth.size()) throw std::invalid_argument("clustering_accuracy: length mismatch");
  if (labels.empty()) throw std::invalid_argument("clustering_accuracy: empty input");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if ((labels[i] != 0 && labels[i] != 1) || (truth[i] != 0 && truth[i] != 1)) {
      throw std::invalid_argument("clustering_accuracy: labels must be 0 or 1");
    }
    if (labels[i] == truth[i]) ++agree;
  }
  const std::size_t best = std::max(agree, labels.size() - agree);
  return static_cast<double>(best) / static_cast<double>(labels.size());
}

}  // namespace psdc
