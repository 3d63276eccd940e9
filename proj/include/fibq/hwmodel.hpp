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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fibq/fibbinary.hpp"

namespace fibq {

/// Where an adder input comes from.
struct Signal {
  enum class Source : std::uint8_t { zero, partial_product, sum, carry };
  Source source = Source::zero;
  // partial_product: (w bit, x bit); sum / carry: (row, column) of the cell.
  int first = 0;
  int second = 0;

  bool operator==(const Signal&) const = default;
};

enum class CellKind : std::uint8_t { full_adder, or_gate };

struct CellPosition {
  int row = 0;
  int column = 0;

  auto operator<=>(const CellPosition&) const = default;
};

struct AdderCell {
  CellPosition position;
  int weight = 0;  // bit significance of the sum output
  CellKind kind = CellKind::full_adder;
  std::array<Signal, 3> inputs;
};

/// n-bit carry-save array multiplier.
///
/// Partial product pp[i][j] = w_i AND x_j has weight i + j. The running sum
/// vector starts as row 0 and the carry vector as row 1; reduction row r
/// (0 <= r < n - 2) adds partial-product row r + 2 with one cell per x bit.
/// The remaining sum and carry vectors are added by an exact carry-propagate
/// stage that is not part of the cell grid.
class MultiplierArray {
 public:
  explicit MultiplierArray(int bitwidth);

  int bitwidth() const noexcept { return bitwidth_; }
  std::size_t full_adder_positions() const noexcept { return cells_.size(); }
  std::size_t count(CellKind kind) const noexcept;

  const std::vector<AdderCell>& cells() const noexcept { return cells_; }
  const AdderCell& at(CellPosition p) const;

  /// Returns a copy with the given cells turned into OR gates.
  MultiplierArray with_or_cells(std::span<const CellPosition> positions) const;

  /// Product as computed by the array (exact cells: FA; OR cells: sum = OR,
  /// carry = 0).
  std::uint64_t evaluate(std::uint32_t w, std::uint32_t x) const;

  /// Like evaluate, also raising max_active[cell] to the number of inputs
  /// that were 1 for this operand pair.
  std::uint64_t evaluate_traced(std::uint32_t w, std::uint32_t x, std::span<std::uint8_t> max_active) const;

 private:
  std::size_t index(CellPosition p) const noexcept;

  int bitwidth_;
  std::vector<AdderCell> cells_;
  // Signals left in the sum and carry vectors after the last row, by weight.
  std::vector<Signal> final_sum_;
  std::vector<Signal> final_carry_;
};

/// Cells that never see more than one 1 input over every (fibbinary w,
/// arbitrary x) pair; exactly those can become OR gates without error.
std::vector<CellPosition> discover_replaceable(const MultiplierArray& array, const FibbinaryTable& table);

std::uint64_t or_multiply(const MultiplierArray& array, std::uint32_t w, std::uint32_t x);

struct MultiplierErrorStats {
  std::uint64_t max_abs_error = 0;
  double mean_abs_error = 0.0;
  std::uint64_t wrong_products = 0;
};

/// Exhaustive deviation of the array from w * x over every x.
MultiplierErrorStats error_sweep(const MultiplierArray& array, std::uint32_t w);

/// OR-gate area relative to a full adder, and OR-gate power relative to a
/// full adder.
inline constexpr double kOrAreaRatio = 0.25;
inline constexpr double kOrPowerRatio = 0.23;

struct CostReport {
  int n = 0;
  std::uint64_t fa_total = 0;
  std::uint64_t fa_replaced = 0;
  double replaced_fraction = 0.0;
  double area_saving = 0.0;
  double power_saving = 0.0;
};

CostReport cost_report(int n, std::uint64_t fa_replaced);

/// Nearest integer percentage, e.g. 0.4375 -> 44.
long percent(double fraction) noexcept;

/// `cost n=.. fa_total=.. ...` single-line record.
std::string to_record(const CostReport& report);

}  // namespace fibq
