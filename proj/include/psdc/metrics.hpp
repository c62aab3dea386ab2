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

#ifndef PSDC_METRICS_HPP_
#define PSDC_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "psdc/data_model.hpp"
#include "psdc/sampling.hpp"

namespace psdc {

/// Haar-distributed n x n orthogonal matrix: Householder QR of a matrix of standard
/// normals (drawn row by row from CounterRng(seed)) with the signs of R's diagonal
/// moved into Q.
Eigen::MatrixXd haar_orthogonal(std::size_t n, std::uint64_t seed);

/// Ground truth with the given spectrum (padded with zeros up to n) and eigenvectors
/// haar_orthogonal(n, seed). Throws std::invalid_argument for negative or increasing
/// eigenvalues or more than n of them.
GroundTruth gen_psd(std::size_t n, const std::vector<double>& eigenvalues, std::uint64_t seed);

/// P_Omega(M) for M dense and symmetric, sharing the mask's pattern.
SampledMatrix sample_dense(const Eigen::MatrixXd& m, const Mask& mask);
SampledMatrix sample_truth(const GroundTruth& truth, const Mask& mask);

/// ||XX' - Ref||_F / ||Ref||_F, formed densely. Throws std::invalid_argument for a
/// zero reference or mismatched n.
double rel_error(const Factor& approx, const Eigen::MatrixXd& reference);

/// Same quantity for Ref = YY' without forming any n x n matrix: with [X Y] = QR,
/// XX' - YY' = Q (R S R') Q' where S = diag(I, -I), so only an (r1+r2)^2 block is formed.
double rel_error(const Factor& approx, const Factor& reference_factor);

struct KMeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centers;  // k x d
  double wcss = 0.0;
  std::size_t iterations = 0;  // Lloyd iterations of the winning repetition
};

/// Lloyd's algorithm on the rows of x with k-means++ seeding; the repetition with the
/// smallest within-cluster sum of squares wins. Repetition t draws from
/// CounterRng(derive_seed(seed, t)). Throws std::invalid_argument when k < 1, k > n
/// or reps < 1.
KMeansResult kmeans_rows(const Factor& x, std::size_t k, std::size_t reps, std::uint64_t seed,
                         std::size_t max_iters = 300);

/// Fraction of matching labels maximized over the two relabelings of {0, 1}.
/// Throws std::invalid_argument for length mismatch, empty input, or labels outside {0, 1}.
double clustering_accuracy(const std::vector<int>& labels, const std::vector<int>& truth);

}  // namespace psdc

#endif  // PSDC_METRICS_HPP_
