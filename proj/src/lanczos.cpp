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

#include "psdc/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "psdc/rng.hpp"
#include "psdc/storage.hpp"

namespace psdc {

namespace {

// Two passes of classical Gram-Schmidt against the first `cols` basis vectors.
void orthogonalize(const Eigen::MatrixXd& basis, Eigen::Index cols, Eigen::VectorXd& w) {
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd coeffs = basis.leftCols(cols).transpose() * w;
    w.noalias() -= basis.leftCols(cols) * coeffs;
  }
}

// Unit vector orthogonal to the first `cols` basis vectors, or false if none was found.
bool fresh_direction(const Eigen::MatrixXd& basis, Eigen::Index cols, CounterRng& rng,
                     Eigen::VectorXd& w) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.normal();
    orthogonalize(basis, cols, w);
    const double norm = w.norm();
    if (norm > 1e-8) {
      w /= norm;
      return true;
    }
  }
  return false;
}

}  // namespace

EigenPairs top_eigenpairs(std::size_t n, std::size_t k, const SymmetricOperator& apply,
                          const LanczosOptions& options) {
  if (n < 1 || k < 1 || k > n) throw std::invalid_argument("top_eigenpairs: need 1 <= k <= n");
  const std::size_t m_sz =
      options.basis_size > 0 ? std::min(n, std::max(options.basis_size, k + 1))
                             : std::min(n, std::max<std::size_t>(2 * k + 20, 40));
  const auto nn = static_cast<Eigen::Index>(n);
  const auto m = static_cast<Eigen::Index>(m_sz);
  const auto kk = static_cast<Eigen::Index>(k);

  storage::Reservation scratch(2 * n * m_sz);
  Eigen::MatrixXd basis(nn, m);
  Eigen::MatrixXd image(nn, m);
  Eigen::VectorXd w(nn);
  Eigen::VectorXd out(nn);
  CounterRng rng(options.seed);

  EigenPairs result;
  fresh_direction(basis, 0, rng, w);
  basis.col(0) = w;
  Eigen::Index filled = 1;
  Eigen::Index with_image = 0;
  bool space_exhausted = false;

  while (true) {
    while (with_image < filled) {
      out.setZero();
      apply(basis.col(with_image), out);
      image.col(with_image) = out;
      ++result.matvecs;
      ++with_image;
    }
    const bool budget_left = result.matvecs < options.max_matvecs;
    if (filled < m && budget_left && !space_exhausted) {
      w = image.col(filled - 1);
      const double scale = std::max(w.norm(), 1.0);
      orthogonalize(basis, filled, w);
      const double norm = w.norm();
      if (norm > 1e-12 * scale) {
        w /= norm;
      } else if (!fresh_direction(basis, filled, rng, w)) {
        space_exhausted = true;
        continue;
      }
      basis.col(filled) = w;
      ++filled;
      continue;
    }

    // Rayleigh-Ritz on the current basis.
    Eigen::MatrixXd projected = basis.leftCols(filled).transpose() * image.leftCols(filled);
    projected = 0.5 * (projected + projected.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(projected);
    const Eigen::VectorXd& theta = eig.eigenvalues();
    const Eigen::Index want = std::min(kk, filled);
    // Descending order: column c of `coeffs` is the c-th largest Ritz vector.
    Eigen::MatrixXd coeffs = eig.eigenvectors().rowwise().reverse();
    Eigen::VectorXd values = theta.reverse();

    const Eigen::MatrixXd ritz = basis.leftCols(filled) * coeffs.leftCols(want);
    const Eigen::MatrixXd ritz_image = image.leftCols(filled) * coeffs.leftCols(want);
    Eigen::VectorXd residuals(want);
    for (Eigen::Index c = 0; c < want; ++c) {
      residuals(c) = (ritz_image.col(c) - values(c) * ritz.col(c)).norm();
    }
    double spread = theta.cwiseAbs().maxCoeff();
    if (spread == 0.0) spread = 1.0;
    const bool full_space = filled == nn || space_exhausted;
    const bool converged =
        want == kk && (full_space || residuals.maxCoeff() <= options.tol * spread);

    if (converged || !budget_left || full_space) {
      result.values = values.head(want);
      result.vectors = ritz;
      result.residuals = residuals;
      result.converged = converged;
      return result;
    }

    // Thick restart: keep the leading Ritz vectors plus the next Krylov direction.
    const Eigen::Index keep = std::min(filled - 1, std::max(kk, (filled + kk) / 2));
    w = image.col(filled - 1);
    orthogonalize(basis, filled, w);
    const double norm = w.norm();
    const bool have_next = norm > 1e-12 * std::max(1.0, spread);
    if (have_next) w /= norm;
    const Eigen::MatrixXd kept = basis.leftCols(filled) * coeffs.leftCols(keep);
    const Eigen::MatrixXd kept_image = image.leftCols(filled) * coeffs.leftCols(keep);
    basis.leftCols(keep) = kept;
    image.leftCols(keep) = kept_image;
    if (!have_next && !fresh_direction(basis, keep, rng, w)) {
      space_exhausted = true;
      filled = keep;
      with_image = keep;
      continue;
    }
    basis.col(keep) = w;
    filled = keep + 1;
    with_image = keep;
  }
}

}  // namespace psdc
