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

#pragma once

#include <cstdint>
#include <vector>

namespace fibq {

using Code = std::uint32_t;

/// Fibonacci numbers with F(1) = F(2) = 1, F(3) = 2, ...
std::uint64_t fibonacci(int k);

/// Zeckendorf expansion of `value`: indices k >= 2, pairwise non-adjacent,
/// stored in descending order. Zero has no indices.
struct ZeckendorfExpansion {
  std::vector<int> indices;
  std::uint64_t value = 0;
};

ZeckendorfExpansion zeckendorf(std::uint64_t n);

/// All b-bit codes with no two adjacent 1 bits, in ascending order.
///
/// The rank of a code in this enumeration coincides with the integer whose
/// Zeckendorf indices are the code's set bit positions shifted by two, which
/// is what makes the 6-bit index storage of 8-bit codes possible.
class FibbinaryTable {
 public:
  static constexpr int kMaxBitwidth = 16;

  /// Shared immutable table for `bitwidth` in 1..16.
  static const FibbinaryTable& get(int bitwidth);

  explicit FibbinaryTable(int bitwidth);

  int bitwidth() const noexcept { return bitwidth_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<Code>& values() const noexcept { return values_; }
  Code operator[](std::size_t rank) const { return values_.at(rank); }

  /// Rank of `code` or -1 when `code` is not fibbinary / out of range.
  int index_of(Code code) const noexcept;

  /// Largest difference between consecutive codes.
  Code max_gap() const noexcept;

 private:
  int bitwidth_;
  std::vector<Code> values_;
  std::vector<int> index_;
};

bool is_fibbinary(Code code, int bitwidth);

Code index_to_value(std::size_t rank, const FibbinaryTable& table);
std::size_t value_to_index(Code code, const FibbinaryTable& table);

/// Closest table value; ties go to the smaller value.
Code nearest_fibbinary(Code code, const FibbinaryTable& table);

}  // namespace fibq
