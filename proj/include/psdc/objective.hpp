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

#ifndef PSDC_OBJECTIVE_HPP_
#define PSDC_OBJECTIVE_HPP_

#include <memory>
#include <vector>

#include "psdc/data_model.hpp"

// The regularized factorized objective
//
//   f(X) = 1/2 sum_{(i,j) in Omega} (<x_i, x_j> - M_ij)^2 + lambda G_alpha(X),
//   G_alpha(X) = sum_i [(||x_i|| - alpha)_+]^4,
//
// where Omega is symmetric, so every stored pair contributes twice to the sum.
// All routines touch only the sampled entries: O(|Omega| r + n r) work.
namespace psdc {

struct ObjectiveParams {
  double lambda = 0.0;
  double alpha = 1.0;

  /// Throws std::invalid_argument unless alpha > 0 and lambda >= 0.
  void validate() const;
};

/// <x_i, x_j> - M_ij on the pattern of the sampled matrix, in storage order.
struct SparseResidual {
  std::shared_ptr<const SparsityPattern> pattern;
  std::vector<double> values;
};

SparseResidual residual(const Factor& x, const SampledMatrix& m);

double g_alpha_value(const Factor& x, double alpha);

/// Row i is 4 (||x_i|| - alpha)_+^3 x_i / ||x_i||; zero whenever ||x_i|| <= alpha.
Factor g_alpha_grad(const Factor& x, double alpha);

/// vec(H)' Hess G_alpha(X) vec(H)
///   = sum_i 4 s_i^3 (||x_i||^2 ||h_i||^2 - <x_i,h_i>^2) / ||x_i||^3
///         + 12 s_i^2 <x_i,h_i>^2 / ||x_i||^2,    s_i = (||x_i|| - alpha)_+.
/// Nonnegative.
double g_alpha_hess_quadform(const Factor& x, const Factor& h, double alpha);

double f_value(const Factor& x, const SampledMatrix& m, const ObjectiveParams& params);

/// 2 P_Omega(XX' - M) X + lambda grad G_alpha(X).
Factor f_grad(const Factor& x, const SampledMatrix& m, const ObjectiveParams& params);

struct ValueAndGrad {
  double value;
  Factor grad;
};

/// f_value and f_grad from one pass over the sampled entries.
ValueAndGrad f_value_and_grad(const Factor& x, const SampledMatrix& m,
                              const ObjectiveParams& params);

/// ||P_Omega(HX' + XH')||_F^2 + 2 <P_Omega(XX' - M), P_Omega(HH')>
///   + lambda vec(H)' Hess G_alpha(X) vec(H).
double f_hess_quadform(const Factor& x, const Factor& h, const SampledMatrix& m,
                       const ObjectiveParams& params);

/// <A, B> = trace(A'B) for equally shaped factors.
double frobenius_inner(const Factor& a, const Factor& b);

}  // namespace psdc

#endif  // PSDC_OBJECTIVE_HPP_
