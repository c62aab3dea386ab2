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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "psdc/data_model.hpp"
#include "psdc/sampling.hpp"

using namespace psdc;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

SampledMatrix parse(const std::string& text) {
  std::istringstream in(text);
  return read_sampled(in);
}

/// Line number reported for a malformed file, or 0 if it loaded.
std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

SampledMatrix random_sample(std::uint64_t seed, std::size_t n, double p) {
  const Mask mask = sample_mask(n, p, seed);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> values(mask.pair_count());
  for (double& v : values) v = nd(gen) * std::pow(10.0, static_cast<int>(gen() % 9) - 4);
  return SampledMatrix(mask.shared_pattern(), std::move(values), p);
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("psdc_test_" + name);
}

}  // namespace

TEST_SUITE("data_model") {

TEST_CASE("empty 5x5 sample writes only the header") {
  std::ostringstream out;
  write_sampled(out, SampledMatrix::empty(5));
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 1);
  CHECK(lines[0] == "5 0");
}

TEST_CASE("single pair writes header and one triplet") {
  const SampledMatrix m = SampledMatrix::from_triplets(3, {{0, 1, 2.5}}, 0.0);
  std::ostringstream out;
  write_sampled(out, m);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "3 1");
  const auto t = tokens_of(lines[1]);
  REQUIRE(t.size() == 3);
  CHECK(t[0] == "0");
  CHECK(t[1] == "1");
  CHECK(std::stod(t[2]) == 2.5);
}

TEST_CASE("values are written with 17 significant digits in scientific notation") {
  CHECK(format_value(2.5) == "2.5000000000000000e+00");
  CHECK(format_value(-1.0 / 3.0) == "-3.3333333333333331e-01");
}

TEST_CASE("loading a minimal file gives one symmetric pair") {
  const SampledMatrix m = parse("3 1\n0 1 2.5\n");
  CHECK(m.n() == 3);
  CHECK(m.pair_count() == 1);
  CHECK(m.value(0, 1) == 2.5);
  CHECK(m.value(1, 0) == 2.5);
  CHECK_FALSE(m.value(0, 2).has_value());
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(error_line("3 1\n2 2 1.0\n") == 2);                // diagonal
  CHECK(error_line("3 1\n0 3 1.0\n") == 2);                // out of range
  CHECK(error_line("3 2\n0 1 1.0\n1 0 2.0\n") == 3);       // duplicate, reversed
  CHECK(error_line("3 1\n0 1\n") == 2);                    // malformed
  CHECK(error_line("3 1\n0 1 abc\n") == 2);                // not a number
  CHECK(error_line("3 1\n0 1 nan\n") == 2);                // not finite
  CHECK(error_line("3 2\n0 1 1.0\n") > 0);                 // missing line
  CHECK(error_line("3 1\n0 1 1.0\n0 2 1.0\n") == 3);       // extra line
  CHECK(error_line("x 1\n") == 1);                         // header
  CHECK(error_line("# comment\n3 1\n# more\n0 1 1.0\n") == 0);
  try {
    parse("3 1\n2 2 1.0\n");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("diagonal") != std::string::npos);
  }
}

TEST_CASE("save then load round-trips bit-exactly") {
  const SampledMatrix m = random_sample(11, 50, 0.3);
  const auto path = temp_file("roundtrip.txt");
  save_sampled(m, path);
  const SampledMatrix back = load_sampled(path);
  CHECK(back == m);
  CHECK(back.p_nominal() == m.p_nominal());
  REQUIRE(back.values().size() == m.values().size());
  for (std::size_t k = 0; k < m.values().size(); ++k) CHECK(back.values()[k] == m.values()[k]);
  std::filesystem::remove(path);
}

TEST_CASE("fuzzed valid files load to the same matrix as their triplets") {
  std::mt19937_64 gen(99);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 1 + gen() % 30;
    std::vector<Triplet> trip;
    std::ostringstream text;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (gen() % 3 != 0) continue;
        const double v = std::ldexp(static_cast<double>(gen() % 100000) - 50000.0,
                                    static_cast<int>(gen() % 40) - 20);
        trip.push_back({i, j, v});
      }
    }
    std::shuffle(trip.begin(), trip.end(), gen);
    text << n << ' ' << trip.size() << '\n';
    for (const Triplet& t : trip) {
      char buf[64];
      std::snprintf(buf, sizeof buf, gen() % 2 ? "%.17g" : "%.17e", t.value);
      if (gen() % 2) text << t.i << ' ' << t.j << ' ' << buf << '\n';
      else text << t.j << '\t' << t.i << "   " << buf << '\n';
      if (gen() % 5 == 0) text << "# noise\n\n";
    }
    const SampledMatrix loaded = parse(text.str());
    const SampledMatrix direct = SampledMatrix::from_triplets(n, trip, 0.0);
    CHECK(loaded == direct);
    std::ostringstream again;
    write_sampled(again, loaded);
    CHECK(parse(again.str()) == loaded);
  }
}

TEST_CASE("iteration yields both orientations with equal values") {
  const SampledMatrix m = random_sample(3, 20, 0.4);
  const auto d = oracle::densify(m);
  std::size_t visits = 0;
  m.for_each_entry([&](std::size_t i, std::size_t j, double v) {
    ++visits;
    CHECK(i != j);
    CHECK(m.value(j, i) == v);
  });
  CHECK(visits == 2 * m.pair_count());
  CHECK(d.values.isApprox(d.values.transpose(), 0.0));
}

TEST_CASE("from_triplets rejects invariant violations") {
  CHECK_THROWS_AS(SampledMatrix::from_triplets(3, {{1, 1, 1.0}}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SampledMatrix::from_triplets(3, {{0, 3, 1.0}}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SampledMatrix::from_triplets(3, {{0, 1, 1.0}, {1, 0, 1.0}}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      SampledMatrix::from_triplets(3, {{0, 1, std::numeric_limits<double>::infinity()}}, 0.0),
      std::invalid_argument);
  const SampledMatrix m = SampledMatrix::from_triplets(4, {{3, 0, 2.0}, {1, 2, -1.0}}, 0.5);
  CHECK(m.value(0, 3) == 2.0);
  CHECK(m.max_abs_value() == 2.0);
  CHECK(m.p_nominal() == 0.5);
}

TEST_CASE("sparsity pattern validates its layout") {
  CHECK_NOTHROW(SparsityPattern(3, {0, 2, 2, 2}, {1, 2}));
  CHECK_THROWS(SparsityPattern(3, {0, 2, 2}, {1, 2}));        // offsets length
  CHECK_THROWS(SparsityPattern(3, {0, 2, 2, 2}, {2, 1}));     // not increasing
  CHECK_THROWS(SparsityPattern(3, {0, 1, 2, 2}, {1, 1}));     // column not above row
  CHECK_THROWS(SparsityPattern(3, {0, 1, 1, 1}, {3}));        // column out of range
  const SparsityPattern p(3, {0, 2, 3, 3}, {1, 2, 2});
  CHECK(p.find(2, 1) == 2);
  CHECK(p.contains(0, 2));
  CHECK_FALSE(p.contains(1, 1));
  CHECK(p.storage_entries() == 4 + 3);
}

TEST_CASE("memory footprint counts the stored-once layout") {
  const MemoryFootprint empty = memory_footprint(SampledMatrix::empty(100), 5);
  CHECK(empty.sparse_entries == 101);
  CHECK(empty.factor_entries == 500);

  const std::size_t n = 10000;
  const double p = 0.004;
  const Mask mask = sample_mask(n, p, 5);
  const MemoryFootprint fp = memory_footprint(mask.indicator(), 2);
  std::size_t pairs = 0;
  mask.pattern().for_each_pair([&](std::size_t, std::size_t, std::size_t) { ++pairs; });
  CHECK(fp.sparse_entries == 2 * pairs + n + 1);
  CHECK(fp.factor_entries == 2 * n);
  // The general CSR layout stores both orientations: 2|Omega| + n + 1 with
  // |Omega| = 2 |pairs|, i.e. 2 n^2 p + n + 1 once |pairs| = n^2 p / 2.
  CHECK(fp.symmetric_csr_entries == 4 * pairs + n + 1);
  const double nominal = 2.0 * n * n * (2.0 * pairs / (double(n) * n)) + n + 1;
  CHECK(static_cast<double>(fp.symmetric_csr_entries) == doctest::Approx(nominal));
}

TEST_CASE("factor validates its entries") {
  CHECK_THROWS_AS(Factor(RowMatrix(0, 2)), std::invalid_argument);
  RowMatrix bad = RowMatrix::Zero(2, 2);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Factor{bad}, std::invalid_argument);
  CHECK_FALSE(Factor::try_from(bad).has_value());
  const Factor z(3, 2);
  CHECK(z.values().isZero());
  CHECK(z.n() == 3);
  CHECK(z.r() == 2);
}

TEST_CASE("factor file round-trips") {
  std::mt19937_64 gen(1);
  RowMatrix v = oracle::gaussian(gen, 7, 3);
  const Factor x(v);
  std::stringstream io;
  write_factor(io, x);
  CHECK(lines_of(io.str())[0] == "7 3");
  const Factor back = read_factor(io);
  CHECK(back.values() == x.values());
  std::istringstream bad("2 2\n1 2\n3\n");
  CHECK_THROWS_AS(read_factor(bad), ParseError);
}

TEST_CASE("ground truth validates and splits the spectrum") {
  std::mt19937_64 gen(4);
  const Eigen::MatrixXd q = oracle::orthogonal(gen, 6);
  Eigen::VectorXd sigma(6);
  sigma << 5, 4, 3, 1, 0.5, 0;
  const GroundTruth truth(sigma, q);
  const Eigen::MatrixXd m = truth.dense();
  CHECK((m - q * sigma.asDiagonal() * q.transpose()).norm() < 1e-12);
  CHECK((truth.dense_truncated(3) + truth.residual(3) - m).norm() < 1e-12);
  const Factor u = truth.factor(3);
  CHECK((u.values() * u.values().transpose() - truth.dense_truncated(3)).norm() < 1e-12);
  CHECK(std::abs(truth.entry(1, 4) - m(1, 4)) < 1e-12);

  Eigen::VectorXd increasing(3);
  increasing << 1, 2, 0;
  CHECK_THROWS_AS(GroundTruth{increasing}, std::invalid_argument);
  Eigen::VectorXd negative(2);
  negative << 1, -1;
  CHECK_THROWS_AS(GroundTruth{negative}, std::invalid_argument);
  Eigen::MatrixXd not_orth = q;
  not_orth(0, 0) += 1e-6;
  CHECK_THROWS_AS(GroundTruth(sigma, not_orth), std::invalid_argument);
  const GroundTruth bare(sigma);
  CHECK_FALSE(bare.has_eigenvectors());
  CHECK_THROWS_AS(bare.eigenvectors(), std::logic_error);
}

TEST_CASE("sampled matrix has no dense constructor") {
  CHECK_FALSE(std::is_constructible_v<SampledMatrix, Eigen::MatrixXd>);
  CHECK_FALSE(std::is_constructible_v<SampledMatrix, const Eigen::MatrixXd&, double>);
}

}  // TEST_SUITE
