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

#include "fibq/hwmodel.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fibq/errors.hpp"

namespace fibq {
namespace {

TEST(HwModelTest, FullAdderCounts) {
  EXPECT_EQ(MultiplierArray(8).full_adder_positions(), 48U);
  EXPECT_EQ(MultiplierArray(4).full_adder_positions(), 8U);
  EXPECT_EQ(MultiplierArray(3).full_adder_positions(), 3U);
  EXPECT_THROW(MultiplierArray(2), DomainError);
}

TEST(HwModelTest, ExactArrayMatchesIntegerProduct) {
  const MultiplierArray a8(8);
  EXPECT_EQ(a8.evaluate(170, 255), 43350U);
  for (int n : {3, 4, 5, 6}) {
    const MultiplierArray a(n);
    for (std::uint32_t w = 0; w < (1U << n); ++w) {
      for (std::uint32_t x = 0; x < (1U << n); ++x) ASSERT_EQ(a.evaluate(w, x), std::uint64_t{w} * x) << n;
    }
  }
  EXPECT_THROW(a8.evaluate(256, 1), DomainError);
}

TEST(HwModelTest, WiringOnlyReferencesEarlierCells) {
  const MultiplierArray a(8);
  for (const auto& cell : a.cells()) {
    for (const auto& in : cell.inputs) {
      if (in.source == Signal::Source::sum || in.source == Signal::Source::carry) {
        EXPECT_LT(in.first, cell.position.row);
      }
    }
  }
}

TEST(HwModelTest, ReplacementKeepsWiring) {
  const MultiplierArray a(6);
  const std::vector<CellPosition> some{{0, 0}, {2, 3}};
  const auto b = a.with_or_cells(some);
  EXPECT_EQ(b.count(CellKind::or_gate), 2U);
  for (std::size_t i = 0; i < a.cells().size(); ++i) EXPECT_EQ(a.cells()[i].inputs, b.cells()[i].inputs);
}

TEST(HwModelTest, DiscoveredSetIsExactForFibbinaryOperands) {
  for (int n : {3, 4, 6, 8}) {
    const MultiplierArray a(n);
    const auto& table = FibbinaryTable::get(n);
    const auto cells = discover_replaceable(a, table);
    const auto approx = a.with_or_cells(cells);
    for (Code w : table.values()) {
      for (std::uint32_t x = 0; x < (1U << n); ++x) ASSERT_EQ(or_multiply(approx, w, x), std::uint64_t{w} * x);
    }
  }
}

TEST(HwModelTest, DiscoveredCountAtEightBits) {
  const auto cells = discover_replaceable(MultiplierArray(8), FibbinaryTable::get(8));
  // Measured for this array layout; the nominal OR count is 28.
  EXPECT_EQ(cells.size(), 12U);
}

TEST(HwModelTest, AddingAnyOtherCellBreaksExactness) {
  const MultiplierArray a(8);
  const auto& table = FibbinaryTable::get(8);
  const auto cells = discover_replaceable(a, table);
  std::set<CellPosition> safe(cells.begin(), cells.end());
  std::vector<CellPosition> others;
  for (const auto& c : a.cells()) {
    if (!safe.contains(c.position)) others.push_back(c.position);
  }
  std::mt19937_64 rng(5);
  std::shuffle(others.begin(), others.end(), rng);
  ASSERT_GE(others.size(), 5U);
  for (std::size_t k = 0; k < 5; ++k) {
    auto with_extra = cells;
    with_extra.push_back(others[k]);
    const auto approx = a.with_or_cells(with_extra);
    bool broken = false;
    for (Code w : table.values()) {
      for (std::uint32_t x = 0; x < 256 && !broken; ++x) broken = or_multiply(approx, w, x) != std::uint64_t{w} * x;
    }
    EXPECT_TRUE(broken) << others[k].row << ":" << others[k].column;
  }
}

TEST(HwModelTest, ZeroOperandAndErrorSweep) {
  const MultiplierArray a(8);
  const auto approx = a.with_or_cells(discover_replaceable(a, FibbinaryTable::get(8)));
  for (std::uint32_t x = 0; x < 256; ++x) EXPECT_EQ(or_multiply(approx, 0, x), 0U);
  EXPECT_EQ(error_sweep(approx, 170).wrong_products, 0U);
  const auto bad = error_sweep(approx, 7);
  EXPECT_GE(bad.max_abs_error, bad.mean_abs_error);
}

TEST(HwModelTest, CostReportExamples) {
  const auto r = cost_report(8, 28);
  EXPECT_EQ(r.fa_total, 48U);
  EXPECT_NEAR(r.replaced_fraction, 0.583333, 1e-6);
  EXPECT_DOUBLE_EQ(r.area_saving, 0.4375);
  EXPECT_NEAR(r.power_saving, 0.449167, 1e-6);
  EXPECT_EQ(percent(r.replaced_fraction), 58);
  EXPECT_EQ(percent(r.area_saving), 44);
  EXPECT_EQ(percent(r.power_saving), 45);

  const auto zero = cost_report(8, 0);
  EXPECT_EQ(zero.replaced_fraction, 0.0);
  EXPECT_EQ(zero.area_saving, 0.0);
  EXPECT_EQ(zero.power_saving, 0.0);

  const auto four = cost_report(4, 6);
  EXPECT_DOUBLE_EQ(four.replaced_fraction, 0.75);
  EXPECT_DOUBLE_EQ(four.area_saving, 0.5625);
  EXPECT_NEAR(four.power_saving, 0.5775, 1e-12);

  EXPECT_THROW(cost_report(8, 49), DomainError);
  EXPECT_NE(to_record(r).find("area_pct=44"), std::string::npos);
}

}  // namespace
}  // namespace fibq
