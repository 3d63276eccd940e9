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

#include <gtest/gtest.h>

#include <cstdlib>

#include "fibq/errors.hpp"

namespace fibq {
namespace {

// Brute-force oracles, independent of the table construction.
bool no_adjacent_ones(Code c) {
  for (int p = 0; p + 1 < 32; ++p) {
    if (((c >> p) & 1U) && ((c >> (p + 1)) & 1U)) return false;
  }
  return true;
}

std::uint64_t fib_recurrence(int k) {
  std::uint64_t a = 1, b = 1;  // F(1), F(2)
  for (int i = 2; i < k; ++i) {
    const auto c = a + b;
    a = b;
    b = c;
  }
  return k == 1 ? 1 : b;
}

TEST(FibbinaryTest, IsFibbinaryExamples) {
  EXPECT_TRUE(is_fibbinary(0, 8));
  EXPECT_TRUE(is_fibbinary(170, 8));
  EXPECT_FALSE(is_fibbinary(3, 8));
  EXPECT_THROW(is_fibbinary(256, 8), DomainError);
}

TEST(FibbinaryTest, TableSizeMatchesBruteForceCensus) {
  for (int b = 1; b <= 12; ++b) {
    std::size_t census = 0;
    for (Code c = 0; c < (Code{1} << b); ++c) census += no_adjacent_ones(c);
    const auto& table = FibbinaryTable::get(b);
    EXPECT_EQ(table.size(), census) << "b=" << b;
    EXPECT_EQ(table.size(), fib_recurrence(b + 2)) << "b=" << b;
  }
  EXPECT_EQ(FibbinaryTable::get(8).size(), 55U);
}

TEST(FibbinaryTest, TableInvariants) {
  const auto& t = FibbinaryTable::get(8);
  EXPECT_EQ(t[0], 0U);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_TRUE(no_adjacent_ones(t[i]));
    EXPECT_EQ(t.index_of(t[i]), static_cast<int>(i));
    if (i > 0) {
      EXPECT_LT(t[i - 1], t[i]);
    }
  }
  EXPECT_EQ(t.index_of(3), -1);
  EXPECT_THROW(FibbinaryTable::get(0), DomainError);
  EXPECT_THROW(FibbinaryTable::get(17), DomainError);
}

TEST(FibbinaryTest, ZeckendorfExamples) {
  EXPECT_TRUE(zeckendorf(0).indices.empty());
  EXPECT_EQ(zeckendorf(54).indices, (std::vector<int>{9, 7, 5, 3}));
  EXPECT_EQ(zeckendorf(1).indices, (std::vector<int>{2}));
}

TEST(FibbinaryTest, ZeckendorfSumsAndNonAdjacency) {
  for (std::uint64_t n = 0; n < 5000; ++n) {
    const auto z = zeckendorf(n);
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < z.indices.size(); ++i) {
      EXPECT_GE(z.indices[i], 2);
      sum += fib_recurrence(z.indices[i]);
      if (i > 0) {
        EXPECT_GE(z.indices[i - 1] - z.indices[i], 2);
      }
    }
    EXPECT_EQ(sum, n);
  }
  const auto big = zeckendorf(~std::uint64_t{0});
  EXPECT_EQ(big.value, ~std::uint64_t{0});
}

TEST(FibbinaryTest, IndexValueExamples) {
  const auto& t = FibbinaryTable::get(8);
  EXPECT_EQ(index_to_value(0, t), 0U);
  EXPECT_EQ(index_to_value(54, t), 170U);
  EXPECT_EQ(index_to_value(1, t), 1U);
  EXPECT_EQ(value_to_index(0, t), 0U);
  EXPECT_EQ(value_to_index(170, t), 54U);
  EXPECT_EQ(value_to_index(8, t), 5U);
  EXPECT_THROW(index_to_value(55, t), DomainError);
  EXPECT_THROW(value_to_index(3, t), DomainError);
  EXPECT_THROW(value_to_index(256, t), DomainError);
}

TEST(FibbinaryTest, ZeckendorfMapEqualsAscendingEnumeration) {
  for (int b = 1; b <= 12; ++b) {
    const auto& t = FibbinaryTable::get(b);
    for (std::size_t r = 0; r < t.size(); ++r) {
      ASSERT_EQ(index_to_value(r, t), t[r]) << "b=" << b << " rank=" << r;
      ASSERT_EQ(value_to_index(t[r], t), r);
    }
  }
}

TEST(FibbinaryTest, NearestExamples) {
  const auto& t = FibbinaryTable::get(8);
  EXPECT_EQ(nearest_fibbinary(5, t), 5U);
  EXPECT_EQ(nearest_fibbinary(3, t), 2U);
  EXPECT_EQ(nearest_fibbinary(255, t), 170U);
  EXPECT_EQ(nearest_fibbinary(7, t), 8U);
  EXPECT_EQ(nearest_fibbinary(200, t), 170U);
}

TEST(FibbinaryTest, NearestMatchesExhaustiveScan) {
  const auto& t = FibbinaryTable::get(8);
  for (Code c = 0; c < 256; ++c) {
    Code best = 0;
    for (Code v = 0; v < 256; ++v) {
      if (!no_adjacent_ones(v)) continue;
      const auto dv = std::abs(static_cast<int>(v) - static_cast<int>(c));
      const auto db = std::abs(static_cast<int>(best) - static_cast<int>(c));
      if (dv < db) best = v;  // ascending scan keeps the smaller value on ties
    }
    const Code got = nearest_fibbinary(c, t);
    ASSERT_EQ(got, best) << "code " << c;
    EXPECT_TRUE(is_fibbinary(got, 8));
    EXPECT_EQ(nearest_fibbinary(got, t), got);
  }
}

TEST(FibbinaryTest, NearestDistanceBound) {
  const auto& t = FibbinaryTable::get(8);
  Code gap = 0;
  for (std::size_t i = 1; i < t.size(); ++i) gap = std::max(gap, t[i] - t[i - 1]);
  EXPECT_EQ(gap, t.max_gap());
  EXPECT_EQ(gap, 43U);
  // Inside the table range a code is at most half a gap away; above the
  // largest value (170) everything clamps down to it.
  for (Code c = 0; c < 256; ++c) {
    const Code n = nearest_fibbinary(c, t);
    const Code d = n > c ? n - c : c - n;
    if (c <= t.values().back()) {
      EXPECT_LE(d, gap / 2) << c;
    } else {
      EXPECT_EQ(d, c - t.values().back());
    }
  }
}

}  // namespace
}  // namespace fibq
