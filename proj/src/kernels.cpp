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

#include "psdc/kernels.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "psdc/rng.hpp"

namespace psdc {

namespace {
constexpr double kInnerRadius = 0.3;
constexpr double kOuterRadius = 1.0;
constexpr double kNoiseStd = 0.1;  // covariance I/100
}  // namespace

void KernelSpec::validate() const {
  switch (family) {
    case KernelFamily::radial:
      if (!(gamma > 0.0)) throw std::invalid_argument("radial kernel: gamma must be positive");
      break;
    case KernelFamily::polynomial:
      if (degree < 1) throw std::invalid_argument("polynomial kernel: degree must be >= 1");
      if (!(offset >= 0.0)) throw std::invalid_argument("polynomial kernel: offset must be >= 0");
      break;
    case KernelFamily::linear:
      break;
  }
}

Dataset::Dataset(RowMatrix points, std::optional<std::vector<int>> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw std::invalid_argument("Dataset: needs at least one point and one dimension");
  }
  if (!points_.allFinite()) throw std::invalid_argument("Dataset: non-finite coordinate");
  if (labels_) {
    if (labels_->size() != n()) throw std::invalid_argument("Dataset: label count mismatch");
    for (int label : *labels_) {
      if (label < 0) throw std::invalid_argument("Dataset: labels must be nonnegative");
    }
  }
  reservation_ = storage::Reservation(static_cast<std::size_t>(points_.size()) +
                                      (labels_ ? labels_->size() : 0));
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::RowVectorXd>& x,
                   const Eigen::Ref<const Eigen::RowVectorXd>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
  switch (spec.family) {
    case KernelFamily::radial:
      return std::exp(-spec.gamma * (x - y).squaredNorm());
    case KernelFamily::polynomial:
      return std::pow(x.dot(y) + spec.offset, spec.degree);
    case KernelFamily::linear:
      return x.dot(y);
  }
  throw std::logic_error("kernel_eval: unknown family");
}

double kernel_entry(const KernelSpec& spec, const Dataset& data, std::size_t i, std::size_t j) {
  return kernel_eval(spec, data.point(i), data.point(j));
}

SampledMatrix build_sampled_kernel(const Dataset& data, const KernelSpec& spec,
                                   const Mask& mask) {
  spec.validate();
  if (mask.n() != data.n()) throw std::invalid_argument("build_sampled_kernel: n mismatch");
  const auto& pattern = mask.pattern();
  const auto offsets = pattern.row_offsets();
  const auto cols = pattern.cols();
  std::vector<double> values(pattern.pair_count());
  for (std::size_t i = 0; i < pattern.n(); ++i) {
    const auto xi = data.point(i);
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
      values[k] = kernel_eval(spec, xi, data.point(cols[k]));
    }
  }
  return SampledMatrix(mask.shared_pattern(), std::move(values), mask.p_nominal());
}

Dataset gen_two_spheres(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_two_spheres: n must be >= 2");
  CounterRng rng(seed);
  RowMatrix points(static_cast<Eigen::Index>(n), 3);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    labels[i] = rng.uniform() < 0.5 ? 0 : 1;
    Eigen::RowVector3d direction;
    do {
      direction << rng.normal(), rng.normal(), rng.normal();
    } while (direction.squaredNorm() == 0.0);
    const double radius = labels[i] == 0 ? kInnerRadius : kOuterRadius;
    points.row(row) = radius * direction.normalized();
    for (Eigen::Index c = 0; c < 3; ++c) points(row, c) += kNoiseStd * rng.normal();
  }
  return Dataset(std::move(points), std::move(labels));
}

void write_dataset(std::ostream& out, const Dataset& data) {
  const bool has_labels = data.labels().has_value();
  out << data.n() << ' ' << data.d() << ' ' << (has_labels ? 1 : 0) << '\n';
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t c = 0; c < data.d(); ++c) {
      if (c > 0) out << ' ';
      out << format_value(data.points()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)));
    }
    if (has_labels) out << ' ' << (*data.labels())[i];
    out << '\n';
  }
}

Dataset read_dataset(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first != std::string::npos && line[first] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError(1, "missing header");
  std::istringstream header(line);
  long long n = 0;
  long long d = 0;
  int has_labels = 0;
  if (!(header >> n >> d) || n < 1 || d < 1) {
    throw ParseError(line_no, "header must be \"n d [has_labels]\"");
  }
  if (!(header >> has_labels)) has_labels = 0;
  RowMatrix points(n, d);
  std::vector<int> labels;
  for (long long i = 0; i < n; ++i) {
    if (!next_line()) throw ParseError(line_no + 1, "missing point");
    std::istringstream row(line);
    for (long long c = 0; c < d; ++c) {
      if (!(row >> points(i, c))) throw ParseError(line_no, "bad coordinate");
    }
    if (has_labels) {
      int label = 0;
      if (!(row >> label)) throw ParseError(line_no, "missing label");
      labels.push_back(label);
    }
    std::string extra;
    if (row >> extra) throw ParseError(line_no, "unexpected trailing token");
  }
  if (has_labels) return Dataset(std::move(points), std::move(labels));
  return Dataset(std::move(points));
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_dataset(out, data);
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_dataset(in);
}

}  // namespace psdc
