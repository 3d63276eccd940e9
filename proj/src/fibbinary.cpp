// Copyright 2026 The fibq Authors
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

#include "fibq/fibbinary.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <mutex>
#include <string>

#include "fibq/errors.hpp"

namespace fibq {

namespace {

// F(93) is the last Fibonacci number that fits in 64 bits.
constexpr int kMaxFibIndex = 93;

const std::array<std::uint64_t, kMaxFibIndex + 1>& fib_table() {
  static const auto table = [] {
    std::array<std::uint64_t, kMaxFibIndex + 1> t{};
    t[1] = 1;
    t[2] = 1;
    for (int k = 3; k <= kMaxFibIndex; ++k) t[k] = t[k - 1] + t[k - 2];
    return t;
  }();
  return table;
}

void check_bitwidth(int bitwidth) {
  if (bitwidth < 1 || bitwidth > FibbinaryTable::kMaxBitwidth) {
    throw DomainError("bitwidth " + std::to_string(bitwidth) + " outside 1..16");
  }
}

}  // namespace

std::uint64_t fibonacci(int k) {
  if (k < 0 || k > kMaxFibIndex) throw DomainError("fibonacci index out of range");
  return fib_table()[k];
}

ZeckendorfExpansion zeckendorf(std::uint64_t n) {
  const auto& fib = fib_table();
  ZeckendorfExpansion out;
  out.value = n;
  std::uint64_t rest = n;
  int k = kMaxFibIndex;
  while (rest > 0) {
    while (fib[k] > rest) --k;
    out.indices.push_back(k);
    rest -= fib[k];
    // Greedy choice never allows F(k-1) next.
    k -= 2;
  }
  return out;
}

const FibbinaryTable& FibbinaryTable::get(int bitwidth) {
  check_bitwidth(bitwidth);
  static std::array<std::unique_ptr<FibbinaryTable>, kMaxBitwidth + 1> cache;
  static std::once_flag flags[kMaxBitwidth + 1];
  std::call_once(flags[bitwidth], [&] { cache[bitwidth] = std::make_unique<FibbinaryTable>(bitwidth); });
  return *cache[bitwidth];
}

FibbinaryTable::FibbinaryTable(int bitwidth) : bitwidth_(bitwidth) {
  check_bitwidth(bitwidth);
  const Code limit = Code{1} << bitwidth;
  index_.assign(limit, -1);
  for (Code c = 0; c < limit; ++c) {
    if ((c & (c >> 1)) == 0) {
      index_[c] = static_cast<int>(values_.size());
      values_.push_back(c);
    }
  }
}

int FibbinaryTable::index_of(Code code) const noexcept {
  return code < index_.size() ? index_[code] : -1;
}

Code FibbinaryTable::max_gap() const noexcept {
  Code gap = 0;
  for (std::size_t i = 1; i < values_.size(); ++i) gap = std::max(gap, values_[i] - values_[i - 1]);
  return gap;
}

bool is_fibbinary(Code code, int bitwidth) {
  check_bitwidth(bitwidth);
  if (code >= (Code{1} << bitwidth)) {
    throw DomainError("code " + std::to_string(code) + " does not fit in " + std::to_string(bitwidth) + " bits");
  }
  return (code & (code >> 1)) == 0;
}

Code index_to_value(std::size_t rank, const FibbinaryTable& table) {
  if (rank >= table.size()) {
    throw DomainError("rank " + std::to_string(rank) + " outside table of size " + std::to_string(table.size()));
  }
  Code code = 0;
  for (int k : zeckendorf(rank).indices) code |= Code{1} << (k - 2);
  return code;
}

std::size_t value_to_index(Code code, const FibbinaryTable& table) {
  if (code >= (Code{1} << table.bitwidth()) || !is_fibbinary(code, table.bitwidth())) {
    throw DomainError("code " + std::to_string(code) + " is not a " + std::to_string(table.bitwidth()) +
                      "-bit fibbinary value");
  }
  // Bit p contributes F(p + 2).
  std::uint64_t rank = 0;
  for (int p = 0; p < table.bitwidth(); ++p) {
    if ((code >> p) & 1U) rank += fibonacci(p + 2);
  }
  return static_cast<std::size_t>(rank);
}

Code nearest_fibbinary(Code code, const FibbinaryTable& table) {
  if (code >= (Code{1} << table.bitwidth())) {
    throw DomainError("code " + std::to_string(code) + " does not fit in " + std::to_string(table.bitwidth()) + " bits");
  }
  const auto& v = table.values();
  auto hi = std::lower_bound(v.begin(), v.end(), code);
  if (hi == v.end()) return v.back();
  if (*hi == code || hi == v.begin()) return *hi;
  auto lo = std::prev(hi);
  return (code - *lo) <= (*hi - code) ? *lo : *hi;
}

}  // namespace fibq
