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

#ifndef PSDC_LANCZOS_HPP_
#define PSDC_LANCZOS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>

#include <Eigen/Core>

namespace psdc {

/// out = A v for a symmetric operator A. out arrives sized to n and zeroed.
using SymmetricOperator = std::function<void(const Eigen::VectorXd& v, Eigen::VectorXd& out)>;

struct LanczosOptions {
  std::size_t max_matvecs = 500;
  /// Ritz pairs are accepted once ||A y - theta y|| <= tol * max |theta|.
  double tol = 1e-10;
  /// Krylov basis size; 0 picks min(n, max(2k + 20, 40)).
  std::size_t basis_size = 0;
  std::uint64_t seed = 0x6c616e637a6f73ULL;
};

struct EigenPairs {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // n x k, orthonormal columns
  Eigen::VectorXd residuals;
  bool converged = false;
  std::size_t matvecs = 0;
};

/// The k algebraically largest eigenpairs of A through matrix-vector products only.
/// Thick-restart Lanczos with full reorthogonalization: the basis holds at most
/// basis_size vectors of length n.
EigenPairs top_eigenpairs(std::size_t n, std::size_t k, const SymmetricOperator& apply,
                          const LanczosOptions& options = {});

}  // namespace psdc

#endif  // PSDC_LANCZOS_HPP_
