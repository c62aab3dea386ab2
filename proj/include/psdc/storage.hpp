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

#ifndef PSDC_STORAGE_HPP_
#define PSDC_STORAGE_HPP_

#include <cstddef>

// Process-wide accounting of the numeric storage held by the library's containers.
// One "entry" is one stored element of a value, index or offset array, whatever its
// width. The counters back the memory contract of the sparse solver: callers can
// reset the peak, run a pipeline and compare the peak against the expected
// O(|Omega| + n r) budget, and check that no single block reached n * n entries.
namespace psdc::storage {

struct Snapshot {
  std::size_t current = 0;
  std::size_t peak = 0;
  std::size_t largest_block = 0;
};

Snapshot snapshot();

// Sets peak := current and largest_block := 0.
void reset_peak();

// RAII registration of a block of entries. Containers hold one as a member so copies
// register again and moves transfer.
class Reservation {
 public:
  Reservation() = default;
  explicit Reservation(std::size_t entries);
  Reservation(const Reservation& other);
  Reservation(Reservation&& other) noexcept;
  Reservation& operator=(const Reservation& other);
  Reservation& operator=(Reservation&& other) noexcept;
  ~Reservation();

  std::size_t entries() const { return entries_; }
  void resize(std::size_t entries);

 private:
  std::size_t entries_ = 0;
};

}  // namespace psdc::storage

#endif  // PSDC_STORAGE_HPP_
