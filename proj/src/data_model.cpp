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

#include "psdc/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string_view>
#include <utility>

namespace psdc {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

// ---------------------------------------------------------------------------
// Factor

Factor::Factor(std::size_t n, std::size_t r)
    : Factor(RowMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r))) {}

Factor::Factor(RowMatrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw std::invalid_argument("Factor: needs n >= 1 and r >= 1");
  }
  if (!values_.allFinite()) throw std::invalid_argument("Factor: non-finite entry");
  reservation_ = storage::Reservation(static_cast<std::size_t>(values_.size()));
}

Factor::Factor(RowMatrix values, Unchecked)
    : values_(std::move(values)),
      reservation_(static_cast<std::size_t>(values_.size())) {}

std::optional<Factor> Factor::try_from(RowMatrix values) {
  if (values.rows() < 1 || values.cols() < 1 || !values.allFinite()) return std::nullopt;
  return Factor(std::move(values), Unchecked{});
}

// ---------------------------------------------------------------------------
// SparsityPattern

SparsityPattern::SparsityPattern(std::size_t n, std::vector<std::size_t> row_offsets,
                                 std::vector<std::uint32_t> cols)
    : n_(n), row_offsets_(std::move(row_offsets)), cols_(std::move(cols)) {
  if (n_ < 1) throw std::invalid_argument("SparsityPattern: n must be >= 1");
  if (n_ > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("SparsityPattern: n exceeds 32-bit column indices");
  }
  if (row_offsets_.size() != n_ + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != cols_.size()) {
    throw std::invalid_argument("SparsityPattern: inconsistent row offsets");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i]) {
      throw std::invalid_argument("SparsityPattern: row offsets decrease");
    }
    std::size_t prev = i;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const std::size_t j = cols_[k];
      if (j <= prev || j >= n_) {
        throw std::invalid_argument("SparsityPattern: row " + std::to_string(i) +
                                    " has an unsorted, diagonal or out-of-range column");
      }
      prev = j;
    }
  }
  row_offsets_.shrink_to_fit();
  cols_.shrink_to_fit();
  reservation_ = storage::Reservation(storage_entries());
}

SparsityPattern SparsityPattern::empty(std::size_t n) {
  return SparsityPattern(n, std::vector<std::size_t>(n + 1, 0), {});
}

std::optional<std::size_t> SparsityPattern::find(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  if (i == j || j >= n_) return std::nullopt;
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(j));
  if (it == last || *it != j) return std::nullopt;
  return static_cast<std::size_t>(it - cols_.begin());
}

// ---------------------------------------------------------------------------
// SampledMatrix

SampledMatrix::SampledMatrix(std::shared_ptr<const SparsityPattern> pattern,
                             std::vector<double> values, double p_nominal)
    : pattern_(std::move(pattern)), values_(std::move(values)), p_nominal_(p_nominal) {
  if (!pattern_) throw std::invalid_argument("SampledMatrix: null pattern");
  if (values_.size() != pattern_->pair_count()) {
    throw std::invalid_argument("SampledMatrix: value count does not match pattern");
  }
  if (!(p_nominal_ >= 0.0 && p_nominal_ <= 1.0)) {
    throw std::invalid_argument("SampledMatrix: p_nominal outside [0, 1]");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("SampledMatrix: non-finite value");
  }
  values_.shrink_to_fit();
  reservation_ = storage::Reservation(values_.size());
}

SampledMatrix SampledMatrix::from_triplets(std::size_t n, std::vector<Triplet> entries,
                                           double p_nominal) {
  if (n < 1) throw std::invalid_argument("SampledMatrix: n must be >= 1");
  for (auto& t : entries) {
    if (t.i == t.j) {
      throw std::invalid_argument("SampledMatrix: diagonal entry (" + std::to_string(t.i) +
                                  ", " + std::to_string(t.j) + ")");
    }
    if (t.i >= n || t.j >= n) throw std::invalid_argument("SampledMatrix: index out of range");
    if (t.i > t.j) std::swap(t.i, t.j);
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::uint32_t> cols;
  std::vector<double> values;
  cols.reserve(entries.size());
  values.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k > 0 && entries[k].i == entries[k - 1].i && entries[k].j == entries[k - 1].j) {
      throw std::invalid_argument("SampledMatrix: duplicate pair (" +
                                  std::to_string(entries[k].i) + ", " +
                                  std::to_string(entries[k].j) + ")");
    }
    ++offsets[entries[k].i + 1];
    cols.push_back(static_cast<std::uint32_t>(entries[k].j));
    values.push_back(entries[k].value);
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  auto pattern = std::make_shared<const SparsityPattern>(n, std::move(offsets), std::move(cols));
  return SampledMatrix(std::move(pattern), std::move(values), p_nominal);
}

SampledMatrix SampledMatrix::empty(std::size_t n, double p_nominal) {
  return SampledMatrix(std::make_shared<const SparsityPattern>(SparsityPattern::empty(n)), {},
                       p_nominal);
}

std::optional<double> SampledMatrix::value(std::size_t i, std::size_t j) const {
  const auto k = pattern_->find(i, j);
  if (!k) return std::nullopt;
  return values_[*k];
}

std::vector<Triplet> SampledMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(values_.size());
  for_each_pair([&](std::size_t i, std::size_t j, double v, std::size_t) {
    out.push_back({i, j, v});
  });
  return out;
}

double SampledMatrix::max_abs_value() const {
  double best = 0.0;
  for (double v : values_) best = std::max(best, std::abs(v));
  return best;
}

bool operator==(const SampledMatrix& a, const SampledMatrix& b) {
  return a.p_nominal_ == b.p_nominal_ && a.values_ == b.values_ &&
         (a.pattern_ == b.pattern_ || *a.pattern_ == *b.pattern_);
}

MemoryFootprint memory_footprint(const SampledMatrix& m, std::size_t r) {
  const std::size_t pairs = m.pair_count();
  const std::size_t n = m.n();
  return {2 * pairs + n + 1, n * r, 2 * (2 * pairs) + n + 1};
}

// ---------------------------------------------------------------------------
// GroundTruth

namespace {

void check_spectrum(const Eigen::VectorXd& eigenvalues) {
  if (eigenvalues.size() < 1) throw std::invalid_argument("GroundTruth: empty spectrum");
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (!std::isfinite(eigenvalues(i)) || eigenvalues(i) < 0.0) {
      throw std::invalid_argument("GroundTruth: eigenvalues must be finite and nonnegative");
    }
    if (i > 0 && eigenvalues(i) > eigenvalues(i - 1)) {
      throw std::invalid_argument("GroundTruth: eigenvalues must be nonincreasing");
    }
  }
}

}  // namespace

GroundTruth::GroundTruth(Eigen::VectorXd eigenvalues) : eigenvalues_(std::move(eigenvalues)) {
  check_spectrum(eigenvalues_);
}

GroundTruth::GroundTruth(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors)
    : eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)) {
  check_spectrum(eigenvalues_);
  const Eigen::Index n = eigenvalues_.size();
  if (eigenvectors_->rows() != n || eigenvectors_->cols() != n) {
    throw std::invalid_argument("GroundTruth: eigenvectors must be n x n");
  }
  const Eigen::MatrixXd gram = eigenvectors_->transpose() * *eigenvectors_;
  const double defect = (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > 1e-10) throw std::invalid_argument("GroundTruth: eigenvectors not orthonormal");
}

const Eigen::MatrixXd& GroundTruth::eigenvectors() const {
  if (!eigenvectors_) throw std::logic_error("GroundTruth: eigenvectors not available");
  return *eigenvectors_;
}

double GroundTruth::entry(std::size_t i, std::size_t j) const {
  const auto& q = eigenvectors();
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  return (q.row(ii).transpose().cwiseProduct(eigenvalues_)).dot(q.row(jj).transpose());
}

namespace {

Eigen::MatrixXd spectral_block(const Eigen::MatrixXd& q, const Eigen::VectorXd& sigma,
                               Eigen::Index first, Eigen::Index count) {
  const auto block = q.middleCols(first, count);
  return block * sigma.segment(first, count).asDiagonal() * block.transpose();
}

}  // namespace

Eigen::MatrixXd GroundTruth::dense() const {
  return spectral_block(eigenvectors(), eigenvalues_, 0, eigenvalues_.size());
}

Eigen::MatrixXd GroundTruth::dense_truncated(std::size_t r) const {
  const auto k = std::min<Eigen::Index>(static_cast<Eigen::Index>(r), eigenvalues_.size());
  return spectral_block(eigenvectors(), eigenvalues_, 0, k);
}

Eigen::MatrixXd GroundTruth::residual(std::size_t r) const {
  const auto k = std::min<Eigen::Index>(static_cast<Eigen::Index>(r), eigenvalues_.size());
  return spectral_block(eigenvectors(), eigenvalues_, k, eigenvalues_.size() - k);
}

Factor GroundTruth::factor(std::size_t r) const {
  const auto& q = eigenvectors();
  const auto n = eigenvalues_.size();
  RowMatrix u = RowMatrix::Zero(n, static_cast<Eigen::Index>(r));
  const auto k = std::min<Eigen::Index>(static_cast<Eigen::Index>(r), n);
  u.leftCols(k) = q.leftCols(k) * eigenvalues_.head(k).cwiseSqrt().asDiagonal();
  return Factor(std::move(u));
}

// ---------------------------------------------------------------------------
// Text I/O

std::string format_value(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(16) << v;
  return os.str();
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line that is not a comment; comments are passed to on_comment.
  template <class OnComment>
  bool next(std::string& line, OnComment&& on_comment) {
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (line[first] == '#') {
        on_comment(std::string_view(line).substr(first + 1));
        continue;
      }
      return true;
    }
    return false;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\r')) ++pos;
    if (pos == s.size()) break;
    std::size_t end = pos;
    while (end < s.size() && s[end] != ' ' && s[end] != '\t' && s[end] != '\r') ++end;
    out.push_back(s.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view token, T& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

void ignore_comment(std::string_view) {}

}  // namespace

void write_sampled(std::ostream& out, const SampledMatrix& m) {
  out << m.n() << ' ' << m.pair_count() << '\n';
  if (m.p_nominal() != 0.0) out << "# p_nominal " << format_value(m.p_nominal()) << '\n';
  m.for_each_pair([&](std::size_t i, std::size_t j, double v, std::size_t) {
    out << i << ' ' << j << ' ' << format_value(v) << '\n';
  });
}

SampledMatrix read_sampled(std::istream& in) {
  LineReader reader(in);
  double p_nominal = 0.0;
  auto on_comment = [&](std::string_view text) {
    const auto tokens = split(text);
    if (tokens.size() == 2 && tokens[0] == "p_nominal") {
      double p = 0.0;
      if (!parse_number(tokens[1], p) || !(p >= 0.0 && p <= 1.0)) {
        throw ParseError(reader.line_no(), "bad p_nominal comment");
      }
      p_nominal = p;
    }
  };

  std::string line;
  if (!reader.next(line, on_comment)) throw ParseError(reader.line_no() + 1, "missing header");
  const auto header = split(line);
  std::size_t n = 0;
  std::size_t pairs = 0;
  if (header.size() != 2 || !parse_number(header[0], n) || !parse_number(header[1], pairs) ||
      n < 1) {
    throw ParseError(reader.line_no(), "header must be \"n nnz_pairs\" with n >= 1");
  }

  std::vector<Triplet> entries;
  std::vector<std::size_t> lines;
  entries.reserve(pairs);
  lines.reserve(pairs);
  while (entries.size() < pairs) {
    if (!reader.next(line, on_comment)) {
      throw ParseError(reader.line_no() + 1, "expected " + std::to_string(pairs) +
                                                 " entries, found " +
                                                 std::to_string(entries.size()));
    }
    const auto tokens = split(line);
    Triplet t;
    if (tokens.size() != 3 || !parse_number(tokens[0], t.i) || !parse_number(tokens[1], t.j) ||
        !parse_number(tokens[2], t.value) || !std::isfinite(t.value)) {
      throw ParseError(reader.line_no(), "malformed entry \"" + line + "\"");
    }
    if (t.i == t.j) throw ParseError(reader.line_no(), "diagonal entry not allowed");
    if (t.i >= n || t.j >= n) throw ParseError(reader.line_no(), "index out of range");
    if (t.i > t.j) std::swap(t.i, t.j);
    entries.push_back(t);
    lines.push_back(reader.line_no());
  }
  if (reader.next(line, ignore_comment)) {
    throw ParseError(reader.line_no(), "unexpected content after last entry");
  }

  std::vector<std::size_t> order(entries.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return entries[a].i != entries[b].i ? entries[a].i < entries[b].i
                                        : entries[a].j < entries[b].j;
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& a = entries[order[k - 1]];
    const auto& b = entries[order[k]];
    if (a.i == b.i && a.j == b.j) {
      throw ParseError(std::max(lines[order[k - 1]], lines[order[k]]), "duplicate pair");
    }
  }
  return SampledMatrix::from_triplets(n, std::move(entries), p_nominal);
}

void save_sampled(const SampledMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_sampled(out, m);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SampledMatrix load_sampled(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_sampled(in);
}

void write_factor(std::ostream& out, const Factor& x) {
  out << x.n() << ' ' << x.r() << '\n';
  for (std::size_t i = 0; i < x.n(); ++i) {
    for (std::size_t k = 0; k < x.r(); ++k) {
      if (k > 0) out << ' ';
      out << format_value(x(i, k));
    }
    out << '\n';
  }
}

Factor read_factor(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line, ignore_comment)) throw ParseError(1, "missing header");
  const auto header = split(line);
  std::size_t n = 0;
  std::size_t r = 0;
  if (header.size() != 2 || !parse_number(header[0], n) || !parse_number(header[1], r) ||
      n < 1 || r < 1) {
    throw ParseError(reader.line_no(), "header must be \"n r\" with n, r >= 1");
  }
  RowMatrix values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r));
  for (std::size_t i = 0; i < n; ++i) {
    if (!reader.next(line, ignore_comment)) throw ParseError(reader.line_no() + 1, "missing row");
    const auto tokens = split(line);
    if (tokens.size() != r) throw ParseError(reader.line_no(), "expected " + std::to_string(r) + " values");
    for (std::size_t k = 0; k < r; ++k) {
      double v = 0.0;
      if (!parse_number(tokens[k], v) || !std::isfinite(v)) {
        throw ParseError(reader.line_no(), "bad value");
      }
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v;
    }
  }
  return Factor(std::move(values));
}

void save_factor(const Factor& x, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_factor(out, x);
}

Factor load_factor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_factor(in);
}

}  // namespace psdc
