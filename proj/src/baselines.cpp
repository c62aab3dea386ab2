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

#include "psdc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "psdc/rng.hpp"

namespace psdc {

ColumnSample sample_columns(const EntryOracle& oracle, std::size_t n, std::size_t c,
                            std::uint64_t seed) {
  if (c < 1 || c > n) throw std::invalid_argument("sample_columns: need 1 <= c <= n");
  CounterRng rng(seed);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t t = 0; t < c; ++t) {
    std::swap(perm[t], perm[t + rng.uniform_index(n - t)]);
  }
  ColumnSample sample;
  sample.indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(c));
  const auto nn = static_cast<Eigen::Index>(n);
  const auto cc = static_cast<Eigen::Index>(c);
  sample.columns.resize(nn, cc);
  for (Eigen::Index t = 0; t < cc; ++t) {
    const std::size_t col = sample.indices[static_cast<std::size_t>(t)];
    for (Eigen::Index i = 0; i < nn; ++i) {
      sample.columns(i, t) = oracle(static_cast<std::size_t>(i), col);
    }
  }
  sample.core.resize(cc, cc);
  for (Eigen::Index a = 0; a < cc; ++a) {
    sample.core.row(a) =
        sample.columns.row(static_cast<Eigen::Index>(sample.indices[static_cast<std::size_t>(a)]));
  }
  sample.core = 0.5 * (sample.core + sample.core.transpose()).eval();
  sample.reservation = storage::Reservation(n * c + c * c + c);
  return sample;
}

Factor nystrom_from_sample(const ColumnSample& sample, std::size_t r) {
  const auto c = static_cast<std::size_t>(sample.core.rows());
  if (r < 1 || r > c) throw std::invalid_argument("nystrom: need 1 <= r <= c");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sample.core);
  if (eig.info() != Eigen::Success) throw std::runtime_error("nystrom: eigensolver failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double top = lambda(lambda.size() - 1);
  const auto n = sample.columns.rows();
  RowMatrix x = RowMatrix::Zero(n, static_cast<Eigen::Index>(r));
  std::size_t kept = 0;
  for (std::size_t t = 0; t < r; ++t) {
    const Eigen::Index col = lambda.size() - 1 - static_cast<Eigen::Index>(t);
    const double value = lambda(col);
    if (!(top > 0.0) || value <= kNystromPinvTol * top) continue;
    x.col(static_cast<Eigen::Index>(t)) =
        sample.columns * eig.eigenvectors().col(col) / std::sqrt(value);
    ++kept;
  }
  if (kept == 0) throw std::runtime_error("nystrom: no eigenvalue of W above tolerance");
  return Factor(std::move(x));
}

Factor nystrom(const EntryOracle& oracle, std::size_t n, std::size_t c, std::size_t r,
               std::uint64_t seed) {
  if (c > n) throw std::invalid_argument("nystrom: c > n");
  if (r < 1 || r > c) throw std::invalid_argument("nystrom: need 1 <= r <= c");
  return nystrom_from_sample(sample_columns(oracle, n, c, seed), r);
}

double nystrom_sampling_rate(std::size_t n, std::size_t c) {
  const double nd = static_cast<double>(n);
  const double cd = static_cast<double>(c);
  return (2.0 * cd * nd - cd * cd) / (nd * nd);
}

SpectralResult spectral_truncate(const SampledMatrix& m, std::size_t r,
                                 const LanczosOptions& options) {
  const std::size_t n = m.n();
  if (r < 1 || r > n) throw std::invalid_argument("spectral_truncate: need 1 <= r <= n");
  const auto nn = static_cast<Eigen::Index>(n);
  const auto rr = static_cast<Eigen::Index>(r);
  if (m.pair_count() == 0) {
    return {Factor(n, r), Eigen::VectorXd::Zero(rr), Eigen::MatrixXd::Zero(nn, rr), true, 0};
  }
  const double p = m.p_nominal();
  if (!(p > 0.0)) throw std::invalid_argument("spectral_truncate: p_nominal must be positive");
  const double scale = 1.0 / p;
  const SymmetricOperator apply = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    m.for_each_pair([&](std::size_t i, std::size_t j, double value, std::size_t) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      out(ii) += scale * value * v(jj);
      out(jj) += scale * value * v(ii);
    });
  };
  const EigenPairs pairs = top_eigenpairs(n, r, apply, options);
  RowMatrix x = RowMatrix::Zero(nn, rr);
  const auto found = pairs.values.size();
  for (Eigen::Index t = 0; t < found; ++t) {
    x.col(t) = pairs.vectors.col(t) * std::sqrt(std::max(pairs.values(t), 0.0));
  }
  Eigen::VectorXd values = Eigen::VectorXd::Zero(rr);
  values.head(found) = pairs.values;
  Eigen::MatrixXd vectors = Eigen::MatrixXd::Zero(nn, rr);
  vectors.leftCols(found) = pairs.vectors;
  return {Factor(std::move(x)), std::move(values), std::move(vectors), pairs.converged,
          pairs.matvecs};
}

}  // namespace psdc
