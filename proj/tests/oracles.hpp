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

#ifndef PSDC_TESTS_ORACLES_HPP_
#define PSDC_TESTS_ORACLES_HPP_

// Brute-force reference implementations used only by the tests. They work on dense
// n x n matrices and plain loops, independently of the library's sparse code paths.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "psdc/data_model.hpp"
#include "psdc/objective.hpp"

namespace oracle {

/// Dense 0/1 symmetric indicator and dense value matrix of a sample.
struct DenseSample {
  Eigen::MatrixXd omega;
  Eigen::MatrixXd values;
};

inline DenseSample densify(const psdc::SampledMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.n());
  DenseSample d{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (const psdc::Triplet& t : m.triplets()) {
    const auto i = static_cast<Eigen::Index>(t.i);
    const auto j = static_cast<Eigen::Index>(t.j);
    d.omega(i, j) = d.omega(j, i) = 1.0;
    d.values(i, j) = d.values(j, i) = t.value;
  }
  return d;
}

inline double g_value(const Eigen::MatrixXd& x, double alpha) {
  double g = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double s = std::max(x.row(i).norm() - alpha, 0.0);
    g += s * s * s * s;
  }
  return g;
}

/// 1/2 sum over ordered (i, j) in Omega of (<x_i, x_j> - M_ij)^2 + lambda G_alpha(X).
inline double f_value(const Eigen::MatrixXd& x, const psdc::SampledMatrix& m,
                      const psdc::ObjectiveParams& params) {
  const DenseSample d = densify(m);
  double f = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
      if (d.omega(i, j) == 0.0) continue;
      const double res = x.row(i).dot(x.row(j)) - d.values(i, j);
      f += 0.5 * res * res;
    }
  }
  return f + params.lambda * g_value(x, params.alpha);
}

/// 2 P(XX' - M) X + lambda grad G, from dense matrices.
inline Eigen::MatrixXd f_grad(const Eigen::MatrixXd& x, const psdc::SampledMatrix& m,
                              const psdc::ObjectiveParams& params) {
  const DenseSample d = densify(m);
  const Eigen::MatrixXd res = d.omega.cwiseProduct(x * x.transpose() - d.values);
  Eigen::MatrixXd g = 2.0 * res * x;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double norm = x.row(i).norm();
    const double s = norm - params.alpha;
    if (s > 0.0) g.row(i) += params.lambda * 4.0 * s * s * s * x.row(i) / norm;
  }
  return g;
}

/// Symmetric matrix with i.i.d. N(0,1) entries from a standard-library engine.
inline Eigen::MatrixXd gaussian(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = nd(gen);
  }
  return a;
}

/// Random orthonormal n x n matrix from a standard-library engine (Gram-Schmidt).
inline Eigen::MatrixXd orthogonal(std::mt19937_64& gen, Eigen::Index n) {
  Eigen::MatrixXd q = gaussian(gen, n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
    q.col(j).normalize();
  }
  return q;
}

/// Sparse sample built from a dense symmetric matrix and a dense indicator.
inline psdc::SampledMatrix sample_from_dense(const Eigen::MatrixXd& values,
                                             const Eigen::MatrixXd& omega, double p) {
  std::vector<psdc::Triplet> t;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < values.cols(); ++j) {
      if (omega(i, j) != 0.0) {
        t.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), values(i, j)});
      }
    }
  }
  return psdc::SampledMatrix::from_triplets(static_cast<std::size_t>(values.rows()), std::move(t), p);
}

/// Dense Bernoulli(p) symmetric off-diagonal indicator.
inline Eigen::MatrixXd bernoulli_mask(std::mt19937_64& gen, Eigen::Index n, double p) {
  std::bernoulli_distribution bd(p);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (bd(gen)) omega(i, j) = omega(j, i) = 1.0;
    }
  }
  return omega;
}

}  // namespace oracle

#endif  // PSDC_TESTS_ORACLES_HPP_
