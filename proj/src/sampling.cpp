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

#include "psdc/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "psdc/rng.hpp"
#include "psdc/storage.hpp"

namespace psdc {

namespace {
constexpr std::uint64_t kPowerStartSeed = 0x7073646370777231ULL;
}

Mask::Mask(std::shared_ptr<const SparsityPattern> pattern, double p_nominal,
           std::uint64_t seed)
    : pattern_(std::move(pattern)), p_nominal_(p_nominal), seed_(seed) {
  if (!pattern_) throw std::invalid_argument("Mask: null pattern");
  if (!(p_nominal_ >= 0.0 && p_nominal_ <= 1.0)) {
    throw std::invalid_argument("Mask: p outside [0, 1]");
  }
}

std::vector<std::pair<std::size_t, std::size_t>> Mask::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(pair_count());
  pattern_->for_each_pair([&](std::size_t i, std::size_t j, std::size_t) { out.emplace_back(i, j); });
  return out;
}

SampledMatrix Mask::indicator() const {
  return SampledMatrix(pattern_, std::vector<double>(pair_count(), 1.0), p_nominal_);
}

Mask Mask::from_sampled(const SampledMatrix& m, std::uint64_t seed) {
  return Mask(m.shared_pattern(), m.p_nominal(), seed);
}

Mask sample_mask(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_mask: p outside [0, 1]");
  if (n < 1) throw std::invalid_argument("sample_mask: n must be >= 1");
  CounterRng rng(seed);
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::uint32_t> cols;
  const double expected = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1) * p;
  cols.reserve(static_cast<std::size_t>(expected + 6.0 * std::sqrt(expected) + 16.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) cols.push_back(static_cast<std::uint32_t>(j));
    }
    offsets[i + 1] = cols.size();
  }
  auto pattern = std::make_shared<const SparsityPattern>(n, std::move(offsets), std::move(cols));
  return Mask(std::move(pattern), p, seed);
}

Eigen::VectorXd centered_matvec(const SparsityPattern& pattern, double p,
                                const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != pattern.n()) {
    throw std::invalid_argument("centered_matvec: vector length does not match n");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Constant(v.size(), -p * v.sum());
  pattern.for_each_pair([&](std::size_t i, std::size_t j, std::size_t) {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    out(ii) += v(jj);
    out(jj) += v(ii);
  });
  return out;
}

Eigen::VectorXd centered_matvec(const Mask& mask, double p, const Eigen::VectorXd& v) {
  return centered_matvec(mask.pattern(), p, v);
}

NormEstimate spectral_norm_centered(const SparsityPattern& pattern, double p,
                                    std::size_t iters, double tol) {
  if (iters < 1) throw std::invalid_argument("spectral_norm_centered: iters must be >= 1");
  const auto n = static_cast<Eigen::Index>(pattern.n());
  storage::Reservation scratch(3 * pattern.n());

  CounterRng rng(kPowerStartSeed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
  v.normalize();

  NormEstimate result;
  double previous = 0.0;
  for (std::size_t it = 1; it <= iters; ++it) {
    const Eigen::VectorXd av = centered_matvec(pattern, p, v);
    const double estimate = av.norm();
    result.iterations = it;
    if (estimate > result.value) result.value = estimate;
    if (estimate == 0.0) {
      result.converged = true;
      break;
    }
    if (it > 1 && std::abs(estimate - previous) <= tol * estimate) {
      result.converged = true;
      break;
    }
    previous = estimate;
    Eigen::VectorXd bv = centered_matvec(pattern, p, av);
    const double norm = bv.norm();
    if (norm == 0.0) {
      result.converged = true;
      break;
    }
    v = bv / norm;
  }
  return result;
}

NormEstimate spectral_norm_centered(const Mask& mask, double p, std::size_t iters, double tol) {
  return spectral_norm_centered(mask.pattern(), p, iters, tol);
}

void save_mask(const Mask& mask, const std::filesystem::path& path) {
  save_sampled(mask.indicator(), path);
}

Mask load_mask(const std::filesystem::path& path) {
  return Mask::from_sampled(load_sampled(path));
}

}  // namespace psdc
