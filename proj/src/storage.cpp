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

#include "psdc/storage.hpp"

#include <atomic>
#include <utility>

namespace psdc::storage {

namespace {

std::atomic<std::size_t> g_current{0};
std::atomic<std::size_t> g_peak{0};
std::atomic<std::size_t> g_largest{0};

void raise_to(std::atomic<std::size_t>& target, std::size_t value) {
  std::size_t seen = target.load(std::memory_order_relaxed);
  while (seen < value &&
         !target.compare_exchange_weak(seen, value, std::memory_order_relaxed)) {
  }
}

void acquire(std::size_t entries) {
  if (entries == 0) return;
  const std::size_t now = g_current.fetch_add(entries, std::memory_order_relaxed) + entries;
  raise_to(g_peak, now);
  raise_to(g_largest, entries);
}

void release(std::size_t entries) {
  if (entries == 0) return;
  g_current.fetch_sub(entries, std::memory_order_relaxed);
}

}  // namespace

Snapshot snapshot() {
  return {g_current.load(), g_peak.load(), g_largest.load()};
}

void reset_peak() {
  g_peak.store(g_current.load());
  g_largest.store(0);
}

Reservation::Reservation(std::size_t entries) : entries_(entries) { acquire(entries_); }

Reservation::Reservation(const Reservation& other) : entries_(other.entries_) {
  acquire(entries_);
}

Reservation::Reservation(Reservation&& other) noexcept
    : entries_(std::exchange(other.entries_, 0)) {}

Reservation& Reservation::operator=(const Reservation& other) {
  if (this != &other) resize(other.entries_);
  return *this;
}

Reservation& Reservation::operator=(Reservation&& other) noexcept {
  if (this != &other) {
    release(entries_);
    entries_ = std::exchange(other.entries_, 0);
  }
  return *this;
}

Reservation::~Reservation() { release(entries_); }

void Reservation::resize(std::size_t entries) {
  acquire(entries);
  release(entries_);
  entries_ = entries;
}

}  // namespace psdc::storage
