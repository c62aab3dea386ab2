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

#ifndef PSDC_KERNELS_HPP_
#define PSDC_KERNELS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "psdc/data_model.hpp"
#include "psdc/sampling.hpp"
#include "psdc/storage.hpp"

namespace psdc {

enum class KernelFamily { radial, polynomial, linear };

/// radial:     exp(-gamma ||x - y||^2)
/// polynomial: (x'y + offset)^degree
/// linear:     x'y
struct KernelSpec {
  KernelFamily family = KernelFamily::radial;
  double gamma = 1.0;
  int degree = 2;
  double offset = 0.0;

  static KernelSpec radial(double gamma) { return {KernelFamily::radial, gamma, 2, 0.0}; }
  static KernelSpec polynomial(int degree, double offset) {
    return {KernelFamily::polynomial, 1.0, degree, offset};
  }
  static KernelSpec linear() { return {KernelFamily::linear, 1.0, 1, 0.0}; }

  /// Throws std::invalid_argument for gamma <= 0, degree < 1 or offset < 0.
  void validate() const;
};

/// n points in R^d, one per row, with optional class labels in [0, k).
class Dataset {
 public:
  explicit Dataset(RowMatrix points, std::optional<std::vector<int>> labels = std::nullopt);

  std::size_t n() const { return static_cast<std::size_t>(points_.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(points_.cols()); }
  const RowMatrix& points() const { return points_; }
  auto point(std::size_t i) const { return points_.row(static_cast<Eigen::Index>(i)); }
  const std::optional<std::vector<int>>& labels() const { return labels_; }

 private:
  RowMatrix points_;
  std::optional<std::vector<int>> labels_;
  storage::Reservation reservation_;
};

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::RowVectorXd>& x,
                   const Eigen::Ref<const Eigen::RowVectorXd>& y);

/// Kernel value between points i and j of the dataset.
double kernel_entry(const KernelSpec& spec, const Dataset& data, std::size_t i, std::size_t j);

/// Evaluates the kernel on every masked pair, row by row, sharing the mask's pattern.
/// Cost O(|Omega| d); no n x n storage.
SampledMatrix build_sampled_kernel(const Dataset& data, const KernelSpec& spec, const Mask& mask);

/// Two classes with probability 1/2 each (labels 0 and 1): label 0 uniform on the
/// sphere of radius 0.3, label 1 on the unit sphere, both in R^3, then every point
/// perturbed by N(0, I/100) noise. Directions are normalized Gaussian draws.
Dataset gen_two_spheres(std::size_t n, std::uint64_t seed);

// Dataset text format: header "n d [has_labels]", then one point per line with an
// optional trailing integer label.
void write_dataset(std::ostream& out, const Dataset& data);
Dataset read_dataset(std::istream& in);
void save_dataset(const Dataset& data, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace psdc

#endif  // PSDC_KERNELS_HPP_
