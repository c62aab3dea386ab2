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

#include "psdc/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace psdc {

namespace {

void require_rows(const Factor& x, const SampledMatrix& m, const char* who) {
  if (x.n() != m.n()) throw std::invalid_argument(std::string(who) + ": x.n != m.n");
}

void require_same_shape(const Factor& a, const Factor& b, const char* who) {
  if (a.n() != b.n() || a.r() != b.r()) {
    throw std::invalid_argument(std::string(who) + ": shape mismatch");
  }
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
}

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

void ObjectiveParams::validate() const {
  require_alpha(alpha);
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
}

SparseResidual residual(const Factor& x, const SampledMatrix& m) {
  require_rows(x, m, "residual");
  const auto& xv = x.values();
  SparseResidual out{m.shared_pattern(), std::vector<double>(m.pair_count())};
  m.for_each_pair([&](std::size_t i, std::size_t j, double v, std::size_t k) {
    out.values[k] = xv.row(idx(i)).dot(xv.row(idx(j))) - v;
  });
  return out;
}

double g_alpha_value(const Factor& x, double alpha) {
  require_alpha(alpha);
  double total = 0.0;
  for (std::size_t i = 0; i < x.n(); ++i) {
    const double excess = x.row(i).norm() - alpha;
    if (excess > 0.0) total += excess * excess * excess * excess;
  }
  return total;
}

Factor g_alpha_grad(const Factor& x, double alpha) {
  require_alpha(alpha);
  RowMatrix g = RowMatrix::Zero(x.values().rows(), x.values().cols());
  for (std::size_t i = 0; i < x.n(); ++i) {
    const double norm = x.row(i).norm();
    const double excess = norm - alpha;
    if (excess > 0.0) g.row(idx(i)) = (4.0 * excess * excess * excess / norm) * x.row(i);
  }
  return Factor(std::move(g));
}

double g_alpha_hess_quadform(const Factor& x, const Factor& h, double alpha) {
  require_alpha(alpha);
  require_same_shape(x, h, "g_alpha_hess_quadform");
  double total = 0.0;
  for (std::size_t i = 0; i < x.n(); ++i) {
    const double norm = x.row(i).norm();
    const double excess = norm - alpha;
    if (excess <= 0.0) continue;
    const double xh = x.row(i).dot(h.row(i));
    const double hh = h.row(i).squaredNorm();
    // Clamp the Cauchy-Schwarz gap so rounding cannot make the quadratic form negative.
    const double gap = std::max(0.0, norm * norm * hh - xh * xh);
    total += 4.0 * excess * excess * excess * gap / (norm * norm * norm) +
             12.0 * excess * excess * xh * xh / (norm * norm);
  }
  return total;
}

double f_value(const Factor& x, const SampledMatrix& m, const ObjectiveParams& params) {
  require_rows(x, m, "f_value");
  params.validate();
  const auto& xv = x.values();
  double fit = 0.0;
  m.for_each_pair([&](std::size_t i, std::size_t j, double v, std::size_t) {
    const double res = xv.row(idx(i)).dot(xv.row(idx(j))) - v;
    fit += res * res;
  });
  // 1/2 * (both orientations) = one term per stored pair.
  double value = fit;
  if (params.lambda > 0.0) value += params.lambda * g_alpha_value(x, params.alpha);
  return value;
}

ValueAndGrad f_value_and_grad(const Factor& x, const SampledMatrix& m,
                              const ObjectiveParams& params) {
  require_rows(x, m, "f_grad");
  params.validate();
  const auto& xv = x.values();
  RowMatrix g = RowMatrix::Zero(xv.rows(), xv.cols());
  double fit = 0.0;
  m.for_each_pair([&](std::size_t i, std::size_t j, double v, std::size_t) {
    const auto xi = xv.row(idx(i));
    const auto xj = xv.row(idx(j));
    const double res = xi.dot(xj) - v;
    fit += res * res;
    g.row(idx(i)) += (2.0 * res) * xj;
    g.row(idx(j)) += (2.0 * res) * xi;
  });
  double value = fit;
  if (params.lambda > 0.0) {
    for (std::size_t i = 0; i < x.n(); ++i) {
      const double norm = x.row(i).norm();
      const double excess = norm - params.alpha;
      if (excess <= 0.0) continue;
      const double e2 = excess * excess;
      value += params.lambda * e2 * e2;
      g.row(idx(i)) += (params.lambda * 4.0 * e2 * excess / norm) * x.row(i);
    }
  }
  return {value, Factor(std::move(g))};
}

Factor f_grad(const Factor& x, const SampledMatrix& m, const ObjectiveParams& params) {
  return f_value_and_grad(x, m, params).grad;
}

double f_hess_quadform(const Factor& x, const Factor& h, const SampledMatrix& m,
                       const ObjectiveParams& params) {
  require_rows(x, m, "f_hess_quadform");
  require_same_shape(x, h, "f_hess_quadform");
  params.validate();
  const auto& xv = x.values();
  const auto& hv = h.values();
  double cross = 0.0;
  double curvature = 0.0;
  m.for_each_pair([&](std::size_t i, std::size_t j, double v, std::size_t) {
    const auto xi = xv.row(idx(i));
    const auto xj = xv.row(idx(j));
    const auto hi = hv.row(idx(i));
    const auto hj = hv.row(idx(j));
    const double sym = hi.dot(xj) + xi.dot(hj);
    cross += sym * sym;
    curvature += (xi.dot(xj) - v) * hi.dot(hj);
  });
  double total = 2.0 * cross + 4.0 * curvature;
  if (params.lambda > 0.0) total += params.lambda * g_alpha_hess_quadform(x, h, params.alpha);
  return total;
}

double frobenius_inner(const Factor& a, const Factor& b) {
  require_same_shape(a, b, "frobenius_inner");
  return a.values().cwiseProduct(b.values()).sum();
}

}  // namespace psdc
