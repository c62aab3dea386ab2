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

#ifndef PSDC_DATA_MODEL_HPP_
#define PSDC_DATA_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "psdc/storage.hpp"

namespace psdc {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Reported by the text readers; line() is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Dense n x r factor X with finite entries. Row i is the embedding x_i of item i.
class Factor {
 public:
  /// Zero factor.
  Factor(std::size_t n, std::size_t r);
  /// Throws std::invalid_argument if empty or if any entry is not finite.
  explicit Factor(RowMatrix values);

  /// Same checks as the constructor but reports failure as nullopt.
  static std::optional<Factor> try_from(RowMatrix values);

  std::size_t n() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t r() const { return static_cast<std::size_t>(values_.cols()); }
  const RowMatrix& values() const { return values_; }
  auto row(std::size_t i) const { return values_.row(static_cast<Eigen::Index>(i)); }
  double operator()(std::size_t i, std::size_t k) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  }

 private:
  struct Unchecked {};
  Factor(RowMatrix values, Unchecked);

  RowMatrix values_;
  storage::Reservation reservation_;
};

/// Upper-triangular compressed-row layout of an off-diagonal symmetric index set.
/// Each unordered pair {i, j} is stored once as (i, j) with i < j; row i lists its
/// partners j > i in increasing order. Immutable once built.
class SparsityPattern {
 public:
  /// Validates offsets/columns: offsets has n+1 nondecreasing entries starting at 0,
  /// and each row's columns are strictly increasing, greater than the row and below n.
  SparsityPattern(std::size_t n, std::vector<std::size_t> row_offsets,
                  std::vector<std::uint32_t> cols);

  static SparsityPattern empty(std::size_t n);

  std::size_t n() const { return n_; }
  std::size_t pair_count() const { return cols_.size(); }
  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::uint32_t> cols() const { return cols_; }

  /// Position of pair {i, j} in storage order, if present. Either orientation.
  std::optional<std::size_t> find(std::size_t i, std::size_t j) const;
  bool contains(std::size_t i, std::size_t j) const { return find(i, j).has_value(); }

  /// f(i, j, k) for every stored pair, i < j, k = storage position.
  template <class F>
  void for_each_pair(F&& f) const {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
        f(i, static_cast<std::size_t>(cols_[k]), k);
      }
    }
  }

  /// Offsets plus column indices.
  std::size_t storage_entries() const { return row_offsets_.size() + cols_.size(); }

  friend bool operator==(const SparsityPattern& a, const SparsityPattern& b) {
    return a.n_ == b.n_ && a.row_offsets_ == b.row_offsets_ && a.cols_ == b.cols_;
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::uint32_t> cols_;
  storage::Reservation reservation_;
};

struct Triplet {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Observed entries P_Omega(M) of a symmetric matrix on an off-diagonal symmetric
/// index set. Values are aligned with the pattern's storage order. The pattern is
/// shared (immutable), so a Mask and the matrices sampled on it use one copy.
///
/// There is deliberately no constructor from a dense matrix.
class SampledMatrix {
 public:
  SampledMatrix(std::shared_ptr<const SparsityPattern> pattern, std::vector<double> values,
                double p_nominal);

  /// Accepts either orientation of each pair; rejects diagonal entries, out-of-range
  /// indices, duplicate pairs and non-finite values with std::invalid_argument.
  static SampledMatrix from_triplets(std::size_t n, std::vector<Triplet> entries,
                                     double p_nominal);
  static SampledMatrix empty(std::size_t n, double p_nominal = 0.0);

  std::size_t n() const { return pattern_->n(); }
  std::size_t pair_count() const { return values_.size(); }
  double p_nominal() const { return p_nominal_; }
  const SparsityPattern& pattern() const { return *pattern_; }
  const std::shared_ptr<const SparsityPattern>& shared_pattern() const { return pattern_; }
  std::span<const double> values() const { return values_; }

  /// f(i, j, value, k) once per stored pair, i < j.
  template <class F>
  void for_each_pair(F&& f) const {
    pattern_->for_each_pair(
        [&](std::size_t i, std::size_t j, std::size_t k) { f(i, j, values_[k], k); });
  }

  /// f(i, j, value) for both orientations of every pair.
  template <class F>
  void for_each_entry(F&& f) const {
    pattern_->for_each_pair([&](std::size_t i, std::size_t j, std::size_t k) {
      f(i, j, values_[k]);
      f(j, i, values_[k]);
    });
  }

  std::optional<double> value(std::size_t i, std::size_t j) const;
  std::vector<Triplet> triplets() const;
  /// max |M_ij| over observed entries; 0 for an empty sample.
  double max_abs_value() const;

  friend bool operator==(const SampledMatrix& a, const SampledMatrix& b);

 private:
  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<double> values_;
  double p_nominal_;
  storage::Reservation reservation_;
};

struct MemoryFootprint {
  /// Values + column indices + row offsets of the stored-once layout: 2|pairs| + n + 1.
  std::size_t sparse_entries = 0;
  /// n * r.
  std::size_t factor_entries = 0;
  /// Same layout with both orientations stored (general CSR): 2|Omega| + n + 1.
  std::size_t symmetric_csr_entries = 0;
};

MemoryFootprint memory_footprint(const SampledMatrix& m, std::size_t r);

/// Spectrum sigma_1 >= ... >= sigma_n >= 0 and, for desk-scale verification, the
/// orthonormal eigenvectors u_1..u_n as columns.
class GroundTruth {
 public:
  explicit GroundTruth(Eigen::VectorXd eigenvalues);
  GroundTruth(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors);

  std::size_t n() const { return static_cast<std::size_t>(eigenvalues_.size()); }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  bool has_eigenvectors() const { return eigenvectors_.has_value(); }
  /// Throws std::logic_error when no eigenvectors are attached.
  const Eigen::MatrixXd& eigenvectors() const;

  double entry(std::size_t i, std::size_t j) const;
  /// M.
  Eigen::MatrixXd dense() const;
  /// M_r, the best rank-r part.
  Eigen::MatrixXd dense_truncated(std::size_t r) const;
  /// N = M - M_r.
  Eigen::MatrixXd residual(std::size_t r) const;
  /// U_r = [sqrt(sigma_1) u_1 ... sqrt(sigma_r) u_r].
  Factor factor(std::size_t r) const;

 private:
  Eigen::VectorXd eigenvalues_;
  std::optional<Eigen::MatrixXd> eigenvectors_;
};

// Triplet text format: header "n nnz_pairs", then one "i j value" line per pair with
// 0 <= i < j < n and value in scientific notation with 17 significant digits.
// Lines starting with '#' are comments; "# p_nominal <p>" right after the header
// carries the sampling probability and is written only when it is nonzero.
void write_sampled(std::ostream& out, const SampledMatrix& m);
SampledMatrix read_sampled(std::istream& in);
void save_sampled(const SampledMatrix& m, const std::filesystem::path& path);
SampledMatrix load_sampled(const std::filesystem::path& path);

// Factor text format: header "n r", then n rows of r values.
void write_factor(std::ostream& out, const Factor& x);
Factor read_factor(std::istream& in);
void save_factor(const Factor& x, const std::filesystem::path& path);
Factor load_factor(const std::filesystem::path& path);

/// Formats with 17 significant digits in scientific notation.
std::string format_value(double v);

}  // namespace psdc

#endif  // PSDC_DATA_MODEL_HPP_
