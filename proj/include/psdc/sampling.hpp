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

#ifndef PSDC_SAMPLING_HPP_
#define PSDC_SAMPLING_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "psdc/data_model.hpp"

namespace psdc {

/// Index set Omega of the off-diagonal symmetric Bernoulli(p) model, stored as the
/// sorted list of pairs i < j (compressed by row).
class Mask {
 public:
  Mask(std::shared_ptr<const SparsityPattern> pattern, double p_nominal, std::uint64_t seed);

  std::size_t n() const { return pattern_->n(); }
  std::size_t pair_count() const { return pattern_->pair_count(); }
  double p_nominal() const { return p_nominal_; }
  std::uint64_t seed() const { return seed_; }
  const SparsityPattern& pattern() const { return *pattern_; }
  const std::shared_ptr<const SparsityPattern>& shared_pattern() const { return pattern_; }

  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

  /// The 0-1 matrix restricted to Omega, as a SampledMatrix with every value 1.0.
  SampledMatrix indicator() const;
  static Mask from_sampled(const SampledMatrix& m, std::uint64_t seed = 0);

  friend bool operator==(const Mask& a, const Mask& b) {
    return a.p_nominal_ == b.p_nominal_ && a.seed_ == b.seed_ && *a.pattern_ == *b.pattern_;
  }

 private:
  std::shared_ptr<const SparsityPattern> pattern_;
  double p_nominal_;
  std::uint64_t seed_;
};

/// Each pair i < j is visited in row-major order and kept when one uniform draw of
/// CounterRng(seed) is below p. Throws std::invalid_argument for p outside [0, 1] or n < 1.
Mask sample_mask(std::size_t n, double p, std::uint64_t seed);

/// (Omega - p J) v, computed as Omega v - p (sum v) 1 without forming any n x n matrix.
Eigen::VectorXd centered_matvec(const SparsityPattern& pattern, double p,
                                const Eigen::VectorXd& v);
Eigen::VectorXd centered_matvec(const Mask& mask, double p, const Eigen::VectorXd& v);

struct NormEstimate {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Power iteration on (Omega - p J)^2. The estimate after each step is ||A v|| for the
/// current unit vector v, which never exceeds ||A||; the returned value is the largest
/// estimate seen, so it is nondecreasing in the iteration budget. Stops once the
/// relative change drops below tol; otherwise returns the best iterate with
/// converged == false.
NormEstimate spectral_norm_centered(const SparsityPattern& pattern, double p,
                                    std::size_t iters = 200, double tol = 1e-6);
NormEstimate spectral_norm_centered(const Mask& mask, double p, std::size_t iters = 200,
                                    double tol = 1e-6);

/// Triplet file with value 1.0 per pair.
void save_mask(const Mask& mask, const std::filesystem::path& path);
Mask load_mask(const std::filesystem::path& path);

}  // namespace psdc

#endif  // PSDC_SAMPLING_HPP_
