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

#ifndef PSDC_THEORY_LAB_HPP_
#define PSDC_THEORY_LAB_HPP_

#include <optional>

#include <Eigen/Core>

#include "psdc/data_model.hpp"
#include "psdc/objective.hpp"
#include "psdc/sampling.hpp"

// Dense checkers for the analysis of the factored objective. Everything here forms
// n x n matrices and is meant for small instances only.
namespace psdc {

/// Absolute slack allowed when checking the deterministic inequalities below.
inline constexpr double kBoundSlack = 1e-9;

/// 0/1 matrix with ones on the mask pairs in both orientations, zero diagonal.
Eigen::MatrixXd mask_indicator(const SparsityPattern& pattern);
Eigen::MatrixXd mask_indicator(const Mask& mask);

/// <P(M1), P(M2)> - t <M1, M2> where P keeps the entries where omega is nonzero.
/// omega is a 0/1 matrix of the same (possibly rectangular) shape as m1 and m2.
double d_omega_t(const Eigen::MatrixXd& omega, double t, const Eigen::MatrixXd& m1,
                 const Eigen::MatrixXd& m2);
double d_omega_t(const Mask& mask, double t, const Eigen::MatrixXd& m1,
                 const Eigen::MatrixXd& m2);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

/// sqrt(sum_k ||A_k||^2 ||B_k||^2) over the rows k of two factors with equal row count.
double row_product_norm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// lhs = |D_{omega,t}(AC', BD')|,
/// rhs = ||omega - tJ|| row_product_norm(A, B) row_product_norm(C, D).
/// A: n1 x r1, B: n1 x r2, C: n2 x r1, D: n2 x r2, omega: n1 x n2.
BoundCheck check_lemma_concern(const Eigen::MatrixXd& omega, double t, const Eigen::MatrixXd& a,
                               const Eigen::MatrixXd& b, const Eigen::MatrixXd& c,
                               const Eigen::MatrixXd& d);

/// lhs = ||AC' o BD'||_* (Hadamard product), rhs = row_product_norm(A, B) row_product_norm(C, D).
BoundCheck hadamard_nuclear_bound(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                  const Eigen::MatrixXd& c, const Eigen::MatrixXd& d);

/// Orthogonal R = B A' from the SVD X'U = A S B'. Then X'UR = A S A' is PSD and R
/// minimizes ||X - UR||_F over orthogonal matrices.
Eigen::MatrixXd align_rotation(const Factor& x, const Factor& u_r);

struct KBreakdown {
  double k_total = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double k4 = 0.0;
  double delta_dd_norm = 0.0;  // ||Delta Delta'||_F
  double u_delta_norm = 0.0;   // ||U Delta'||_F

  /// |k_total - (k1 + k2 + k3 + k4)| / (|k_total| + |k1| + |k2| + |k3| + |k4|), 0 when all vanish.
  double identity_gap() const;
};

/// K(X) = vec(Delta)' Hess f(X) vec(Delta) - 4 <grad f(X), Delta>, Delta = X - U_r R.
/// k_total uses the objective module; k1..k4 are evaluated densely from
///   k1 = p (||DD'||^2 - 3||XX' - UU'||^2)
///   k2 = D_{Omega,p}(DD', DD') - 3 D_{Omega,p}(XX' - UU', XX' - UU')
///   k3 = lambda (vec(D)' Hess G vec(D) - 4 <grad G, D>)
///   k4 = 6 D_{Omega,p}(DD', N) + 8 D_{Omega,p}(UD', N) + 6p <DD', N>
/// with D = Delta, N = M - M_r, p = m.p_nominal(). The sum matches k_total whenever the
/// sampled values agree with the truth on the mask.
/// Throws std::invalid_argument when the truth has no eigenvectors or shapes disagree.
KBreakdown k_value(const Factor& x, const SampledMatrix& m, const ObjectiveParams& params,
                   const GroundTruth& truth, std::size_t r);

/// (n/r) max_i ||P_U e_i||^2 for the column span of u. Throws std::invalid_argument
/// when u is rank deficient.
double incoherence(const Eigen::MatrixXd& u);
double incoherence(const Factor& u);

/// sqrt(n) ||U||_{2,inf} / ||U||_F. Throws std::invalid_argument for a zero matrix.
double spikiness(const Factor& u_r);

struct SandwichCheck {
  double mu = 0.0;
  double mu_tilde = 0.0;
  double kappa = 1.0;
  bool holds = true;  // mu_tilde^2 / kappa <= mu <= kappa mu_tilde^2, relative slack 1e-10
};

/// Compares incoherence and spikiness of U_r = V_r Sigma_r^{1/2}. kappa defaults to
/// sigma_1 / sigma_r read off the singular values of u_r.
SandwichCheck spikiness_sandwich(const Factor& u_r, std::optional<double> kappa = std::nullopt);

}  // namespace psdc

#endif  // PSDC_THEORY_LAB_HPP_
