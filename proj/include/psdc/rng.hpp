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

#ifndef PSDC_RNG_HPP_
#define PSDC_RNG_HPP_

#include <cstddef>
#include <cstdint>

namespace psdc {

// SplitMix64 in counter form: draw k (k = 1, 2, ...) is mix(seed + k * 0x9E3779B97F4A7C15),
// with the finalizer of Steele, Lea and Flood (2014). The k-th output depends only on
// (seed, k), so any stream position can be reproduced in another language.
//
// uniform() uses the top 53 bits: (u64 >> 11) * 2^-53, giving values in [0, 1).
// normal() is Box-Muller on two consecutive uniforms u1, u2:
//   z0 = sqrt(-2 ln(1 - u1)) cos(2 pi u2),  z1 = sqrt(-2 ln(1 - u1)) sin(2 pi u2),
// returned in that order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  double uniform();
  double normal();
  // Uniform integer in [0, bound). bound must be positive.
  std::size_t uniform_index(std::size_t bound);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t x);

// Derives an independent seed for a sub-stream, e.g. (base seed, trial index, purpose).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace psdc

#endif  // PSDC_RNG_HPP_
