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

#ifndef PSDC_BASELINES_HPP_
#define PSDC_BASELINES_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "psdc/data_model.hpp"
#include "psdc/lanczos.hpp"
#include "psdc/storage.hpp"

namespace psdc {

/// Returns M_ij on demand.
using EntryOracle = std::function<double(std::size_t, std::size_t)>;

/// c columns of M chosen uniformly without replacement, and the induced c x c block.
struct ColumnSample {
  std::vector<std::size_t> indices;
  Eigen::MatrixXd columns;  // C, n x c
  Eigen::MatrixXd core;     // W = M[I, I] = C[I, :]
  storage::Reservation reservation;
};

ColumnSample sample_columns(const EntryOracle& oracle, std::size_t n, std::size_t c,
                            std::uint64_t seed);

/// Eigenvalues of W at or below this fraction of its largest eigenvalue are dropped.
inline constexpr double kNystromPinvTol = 1e-10;

/// X = C V_r Lambda_r^{-1/2} from the top-r eigenpairs of W, so XX' = C W_r^+ C'.
/// Columns for dropped eigenvalues are zero. Throws std::runtime_error when none of the
/// top-r eigenvalues survives the tolerance.
Factor nystrom_from_sample(const ColumnSample& sample, std::size_t r);

/// Nystrom factor from c sampled columns. Requires 1 <= r <= c <= n.
Factor nystrom(const EntryOracle& oracle, std::size_t n, std::size_t c, std::size_t r,
               std::uint64_t seed);

/// Fraction of entries touched by a c-column Nystrom sample: (2cn - c^2) / n^2.
double nystrom_sampling_rate(std::size_t n, std::size_t c);

struct SpectralResult {
  Factor factor;              // V_r diag(sqrt(max(theta, 0)))
  Eigen::VectorXd eigenvalues;  // raw top-r eigenvalues of (1/p) P_Omega(M), descending
  Eigen::MatrixXd eigenvectors;
  bool converged = false;
  std::size_t matvecs = 0;
};

/// Top-r eigendecomposition of (1/p) P_Omega(M) using sparse products only, with
/// negative eigenvalues clamped to zero in the returned factor. An empty sample gives
/// the zero factor.
SpectralResult spectral_truncate(const SampledMatrix& m, std::size_t r,
                                 const LanczosOptions& options = {});

}  // namespace psdc

#endif  // PSDC_BASELINES_HPP_
