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

#include "psdc/theory_lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace psdc {
namespace {

void require_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

double spectral_norm_dense(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

}  // namespace

Eigen::MatrixXd mask_indicator(const SparsityPattern& pattern) {
  const auto n = static_cast<Eigen::Index>(pattern.n());
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
  pattern.for_each_pair([&](std::size_t i, std::size_t j, std::size_t) {
    omega(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    omega(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
  });
  return omega;
}

Eigen::MatrixXd mask_indicator(const Mask& mask) { return mask_indicator(mask.pattern()); }

double d_omega_t(const Eigen::MatrixXd& omega, double t, const Eigen::MatrixXd& m1,
                 const Eigen::MatrixXd& m2) {
  require_same_shape(m1, m2, "d_omega_t");
  require_same_shape(omega, m1, "d_omega_t");
  return (omega.array() * m1.array() * m2.array()).sum() - t * (m1.array() * m2.array()).sum();
}

double d_omega_t(const Mask& mask, double t, const Eigen::MatrixXd& m1,
                 const Eigen::MatrixXd& m2) {
  return d_omega_t(mask_indicator(mask), t, m1, m2);
}

double row_product_norm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("row_product_norm: row count mismatch");
  return std::sqrt(
      (a.rowwise().squaredNorm().array() * b.rowwise().squaredNorm().array()).sum());
}

BoundCheck check_lemma_concern(const Eigen::MatrixXd& omega, double t, const Eigen::MatrixXd& a,
                               const Eigen::MatrixXd& b, const Eigen::MatrixXd& c,
                               const Eigen::MatrixXd& d) {
  if (a.cols() != c.cols() || b.cols() != d.cols() || a.rows() != b.rows() ||
      c.rows() != d.rows() || omega.rows() != a.rows() || omega.cols() != c.rows()) {
    throw std::invalid_argument("check_lemma_concern: shape mismatch");
  }
  BoundCheck out;
  out.lhs = std::abs(d_omega_t(omega, t, a * c.transpose(), b * d.transpose()));
  const Eigen::MatrixXd centered = omega.array() - t;
  out.rhs = spectral_norm_dense(centered) * row_product_norm(a, b) * row_product_norm(c, d);
  out.holds = out.lhs <= out.rhs + kBoundSlack;
  return out;
}

BoundCheck hadamard_nuclear_bound(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                  const Eigen::MatrixXd& c, const Eigen::MatrixXd& d) {
  if (a.cols() != c.cols() || b.cols() != d.cols() || a.rows() != b.rows() ||
      c.rows() != d.rows()) {
    throw std::invalid_argument("hadamard_nuclear_bound: shape mismatch");
  }
  const Eigen::MatrixXd product =
      ((a * c.transpose()).array() * (b * d.transpose()).array()).matrix();
  BoundCheck out;
  if (product.size() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(product);
    out.lhs = svd.singularValues().sum();
  }
  out.rhs = row_product_norm(a, b) * row_product_norm(c, d);
  out.holds = out.lhs <= out.rhs + kBoundSlack;
  return out;
}

Eigen::MatrixXd align_rotation(const Factor& x, const Factor& u_r) {
  if (x.n() != u_r.n() || x.r() != u_r.r()) {
    throw std::invalid_argument("align_rotation: shape mismatch");
  }
  const Eigen::MatrixXd cross = x.values().transpose() * u_r.values();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw std::runtime_error("align_rotation: SVD failed");
  return svd.matrixV() * svd.matrixU().transpose();
}

double KBreakdown::identity_gap() const {
  const double scale = std::abs(k_total) + std::abs(k1) + std::abs(k2) + std::abs(k3) +
                       std::abs(k4);
  if (scale == 0.0) return 0.0;
  return std::abs(k_total - (k1 + k2 + k3 + k4)) / scale;
}

KBreakdown k_value(const Factor& x, const SampledMatrix& m, const ObjectiveParams& params,
                   const GroundTruth& truth, std::size_t r) {
  if (!truth.has_eigenvectors()) throw std::invalid_argument("k_value: truth lacks eigenvectors");
  if (x.n() != m.n() || truth.n() != m.n() || x.r() != r) {
    throw std::invalid_argument("k_value: shape mismatch");
  }
  params.validate();
  const Factor u_r = truth.factor(r);
  const Eigen::MatrixXd rot = align_rotation(x, u_r);
  const Eigen::MatrixXd u = u_r.values() * rot;
  const Eigen::MatrixXd xv = x.values();
  const Eigen::MatrixXd delta = xv - u;
  const Factor delta_f{RowMatrix(delta)};

  KBreakdown out;
  const Factor grad = f_grad(x, m, params);
  out.k_total = f_hess_quadform(x, delta_f, m, params) - 4.0 * frobenius_inner(grad, delta_f);

  const double p = m.p_nominal();
  const Eigen::MatrixXd omega = mask_indicator(m.pattern());
  const auto dop = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return d_omega_t(omega, p, a, b);
  };
  const Eigen::MatrixXd dd = delta * delta.transpose();
  const Eigen::MatrixXd e = xv * xv.transpose() - u * u.transpose();
  const Eigen::MatrixXd ud = u * delta.transpose();
  const Eigen::MatrixXd resid = truth.residual(r);

  out.k1 = p * (dd.squaredNorm() - 3.0 * e.squaredNorm());
  out.k2 = dop(dd, dd) - 3.0 * dop(e, e);
  if (params.lambda != 0.0) {
    const Factor ggrad = g_alpha_grad(x, params.alpha);
    out.k3 = params.lambda * (g_alpha_hess_quadform(x, delta_f, params.alpha) -
                              4.0 * frobenius_inner(ggrad, delta_f));
  }
  out.k4 = 6.0 * dop(dd, resid) + 8.0 * dop(ud, resid) + 6.0 * p * (dd.array() * resid.array()).sum();
  out.delta_dd_norm = dd.norm();
  out.u_delta_norm = ud.norm();
  return out;
}

double incoherence(const Eigen::MatrixXd& u) {
  const auto n = u.rows();
  const auto r = u.cols();
  if (n == 0 || r == 0 || r > n) throw std::invalid_argument("incoherence: bad shape");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(u);
  qr.setThreshold(1e-12);
  if (qr.rank() != r) throw std::invalid_argument("incoherence: rank-deficient basis");
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
  return static_cast<double>(n) / static_cast<double>(r) * q.rowwise().squaredNorm().maxCoeff();
}

double incoherence(const Factor& u) { return incoherence(Eigen::MatrixXd(u.values())); }

double spikiness(const Factor& u_r) {
  const double fro = u_r.values().norm();
  if (!(fro > 0.0)) throw std::invalid_argument("spikiness: zero matrix");
  const double max_row = std::sqrt(u_r.values().rowwise().squaredNorm().maxCoeff());
  return std::sqrt(static_cast<double>(u_r.n())) * max_row / fro;
}

SandwichCheck spikiness_sandwich(const Factor& u_r, std::optional<double> kappa) {
  SandwichCheck out;
  out.mu = incoherence(u_r);
  out.mu_tilde = spikiness(u_r);
  if (kappa) {
    out.kappa = *kappa;
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(u_r.values());
    const auto& s = svd.singularValues();
    out.kappa = (s(0) / s(s.size() - 1)) * (s(0) / s(s.size() - 1));
  }
  const double mt2 = out.mu_tilde * out.mu_tilde;
  const double slack = 1e-10 * std::max(out.mu, mt2 * out.kappa);
  out.holds = mt2 / out.kappa <= out.mu + slack && out.mu <= out.kappa * mt2 + slack;
  return out;
}

}  // namespace psdc
