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
#include <set>

#include "doctest.h"
#include "psdc/rng.hpp"
#include "psdc/storage.hpp"

using namespace psdc;

TEST_SUITE("infra") {

TEST_CASE("counter rng is a pure function of seed and draw index") {
  CounterRng a(42), b(42), c(43);
  for (int k = 0; k < 100; ++k) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());
  }
  CHECK(a.counter() == 100);
  // Draw k is mix64(seed + (k+1) * golden ratio increment) with SplitMix64 finalizer.
  CounterRng d(7);
  const std::uint64_t first = d.next_u64();
  CounterRng e(7);
  CHECK(first == e.next_u64());
}

TEST_CASE("splitmix64 reference values") {
  // Published SplitMix64 outputs for state 0: the first draw is mix of 0x9E3779B97F4A7C15.
  CounterRng rng(0);
  CHECK(rng.next_u64() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next_u64() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next_u64() == 0x06C45D188009454FULL);
}

TEST_CASE("uniforms lie in [0, 1) and normals have unit moments") {
  CounterRng rng(5);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("uniform_index covers the range without leaving it") {
  CounterRng rng(9);
  std::set<std::size_t> seen;
  for (int k = 0; k < 1000; ++k) {
    const auto v = rng.uniform_index(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  CHECK(rng.uniform_index(1) == 0);
}

TEST_CASE("derive_seed separates streams") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t a = 0; a < 20; ++a) {
    for (std::uint64_t b = 0; b < 20; ++b) seeds.insert(derive_seed(1, a, b));
  }
  CHECK(seeds.size() == 400);
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
}

TEST_CASE("storage reservations track current, peak and largest block") {
  storage::reset_peak();
  const auto base = storage::snapshot();
  {
    storage::Reservation a(100);
    storage::Reservation b(50);
    CHECK(storage::snapshot().current == base.current + 150);
    storage::Reservation c = a;  // copy registers again
    CHECK(storage::snapshot().current == base.current + 250);
    storage::Reservation d = std::move(b);  // move transfers
    CHECK(storage::snapshot().current == base.current + 250);
    d.resize(10);
    CHECK(storage::snapshot().current == base.current + 210);
    CHECK(storage::snapshot().largest_block >= 100);
  }
  const auto after = storage::snapshot();
  CHECK(after.current == base.current);
  CHECK(after.peak >= base.current + 250);
  storage::reset_peak();
  CHECK(storage::snapshot().peak == after.current);
  CHECK(storage::snapshot().largest_block == 0);
}

}  // TEST_SUITE
