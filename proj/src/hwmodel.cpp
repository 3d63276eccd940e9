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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fibq/errors.hpp"

namespace fibq {

MultiplierArray::MultiplierArray(int bitwidth) : bitwidth_(bitwidth) {
  if (bitwidth < 3 || bitwidth > 16) throw DomainError("carry-save array needs 3 <= n <= 16");
  const int n = bitwidth;
  const int width = 2 * n + 1;
  std::vector<Signal> sum(width), carry(width);
  for (int j = 0; j < n; ++j) {
    sum[j] = {Signal::Source::partial_product, 0, j};
    carry[1 + j] = {Signal::Source::partial_product, 1, j};
  }
  cells_.reserve(static_cast<std::size_t>((n - 2) * n));
  for (int r = 0; r < n - 2; ++r) {
    std::vector<Signal> next_carry = carry;
    for (int j = 0; j < n; ++j) {
      const int wt = r + 2 + j;
      AdderCell cell;
      cell.position = {r, j};
      cell.weight = wt;
      cell.inputs = {Signal{Signal::Source::partial_product, r + 2, j}, sum[wt], carry[wt]};
      cells_.push_back(cell);
      sum[wt] = {Signal::Source::sum, r, j};
      // The carry slot at wt is consumed; wt + 1 receives this cell's carry.
      if (next_carry[wt].source != Signal::Source::carry || next_carry[wt].first != r) next_carry[wt] = {};
      next_carry[wt + 1] = {Signal::Source::carry, r, j};
    }
    carry = std::move(next_carry);
  }
  final_sum_ = std::move(sum);
  final_carry_ = std::move(carry);
}

std::size_t MultiplierArray::count(CellKind kind) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [&](const AdderCell& c) { return c.kind == kind; }));
}

std::size_t MultiplierArray::index(CellPosition p) const noexcept {
  return static_cast<std::size_t>(p.row * bitwidth_ + p.column);
}

const AdderCell& MultiplierArray::at(CellPosition p) const {
  if (p.row < 0 || p.row >= bitwidth_ - 2 || p.column < 0 || p.column >= bitwidth_) {
    throw DomainError("cell position outside the array");
  }
  return cells_[index(p)];
}

MultiplierArray MultiplierArray::with_or_cells(std::span<const CellPosition> positions) const {
  MultiplierArray out = *this;
  for (const auto& p : positions) {
    at(p);
    out.cells_[index(p)].kind = CellKind::or_gate;
  }
  return out;
}

std::uint64_t MultiplierArray::evaluate(std::uint32_t w, std::uint32_t x) const {
  return evaluate_traced(w, x, {});
}

std::uint64_t MultiplierArray::evaluate_traced(std::uint32_t w, std::uint32_t x,
                                               std::span<std::uint8_t> max_active) const {
  const std::uint32_t limit = std::uint32_t{1} << bitwidth_;
  if (w >= limit || x >= limit) throw DomainError("operand does not fit the multiplier width");

  std::vector<std::uint8_t> sums(cells_.size()), carries(cells_.size());
  auto value = [&](const Signal& s) -> unsigned {
    switch (s.source) {
      case Signal::Source::zero:
        return 0;
      case Signal::Source::partial_product:
        return ((w >> s.first) & (x >> s.second)) & 1U;
      case Signal::Source::sum:
        return sums[index({s.first, s.second})];
      case Signal::Source::carry:
        return carries[index({s.first, s.second})];
    }
    return 0;
  };

  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const auto& cell = cells_[i];
    const unsigned a = value(cell.inputs[0]);
    const unsigned b = value(cell.inputs[1]);
    const unsigned c = value(cell.inputs[2]);
    const unsigned ones = a + b + c;
    if (!max_active.empty()) max_active[i] = std::max<std::uint8_t>(max_active[i], static_cast<std::uint8_t>(ones));
    if (cell.kind == CellKind::full_adder) {
      sums[i] = static_cast<std::uint8_t>(ones & 1U);
      carries[i] = static_cast<std::uint8_t>(ones >> 1);
    } else {
      sums[i] = static_cast<std::uint8_t>(a | b | c);
      carries[i] = 0;
    }
  }

  std::uint64_t total = 0;
  for (std::size_t wt = 0; wt < final_sum_.size(); ++wt) {
    total += static_cast<std::uint64_t>(value(final_sum_[wt]) + value(final_carry_[wt])) << wt;
  }
  return total;
}

std::vector<CellPosition> discover_replaceable(const MultiplierArray& array, const FibbinaryTable& table) {
  if (table.bitwidth() != array.bitwidth()) throw DomainError("table and array bitwidths differ");
  std::vector<std::uint8_t> max_active(array.cells().size(), 0);
  const std::uint32_t limit = std::uint32_t{1} << array.bitwidth();
  for (Code w : table.values()) {
    for (std::uint32_t x = 0; x < limit; ++x) array.evaluate_traced(w, x, max_active);
  }
  std::vector<CellPosition> out;
  for (std::size_t i = 0; i < max_active.size(); ++i) {
    if (max_active[i] <= 1) out.push_back(array.cells()[i].position);
  }
  return out;
}

std::uint64_t or_multiply(const MultiplierArray& array, std::uint32_t w, std::uint32_t x) {
  return array.evaluate(w, x);
}

MultiplierErrorStats error_sweep(const MultiplierArray& array, std::uint32_t w) {
  MultiplierErrorStats stats;
  const std::uint32_t limit = std::uint32_t{1} << array.bitwidth();
  double sum = 0.0;
  for (std::uint32_t x = 0; x < limit; ++x) {
    const auto got = static_cast<std::int64_t>(array.evaluate(w, x));
    const auto want = static_cast<std::int64_t>(w) * x;
    const auto err = static_cast<std::uint64_t>(std::llabs(got - want));
    stats.max_abs_error = std::max(stats.max_abs_error, err);
    stats.wrong_products += err != 0;
    sum += static_cast<double>(err);
  }
  stats.mean_abs_error = sum / limit;
  return stats;
}

CostReport cost_report(int n, std::uint64_t fa_replaced) {
  if (n < 3) throw DomainError("cost model needs n >= 3");
  CostReport r;
  r.n = n;
  r.fa_total = static_cast<std::uint64_t>(n - 2) * static_cast<std::uint64_t>(n);
  if (fa_replaced > r.fa_total) throw DomainError("more replaced cells than full adders");
  r.fa_replaced = fa_replaced;
  r.replaced_fraction = static_cast<double>(fa_replaced) / static_cast<double>(r.fa_total);
  r.area_saving = r.replaced_fraction * (1.0 - kOrAreaRatio);
  r.power_saving = r.replaced_fraction * (1.0 - kOrPowerRatio);
  return r;
}

long percent(double fraction) noexcept { return std::lround(fraction * 100.0); }

std::string to_record(const CostReport& r) {
  std::ostringstream os;
  os << "cost n=" << r.n << " fa_total=" << r.fa_total << " fa_replaced=" << r.fa_replaced
     << " replaced_fraction=" << r.replaced_fraction << " area_saving=" << r.area_saving
     << " power_saving=" << r.power_saving << " replaced_pct=" << percent(r.replaced_fraction)
     << " area_pct=" << percent(r.area_saving) << " power_pct=" << percent(r.power_saving);
  return os.str();
}

}  // namespace fibq
