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

#include "fibq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "fibq/errors.hpp"
#include "fibq/fibbinary.hpp"

namespace fibq {

const char* to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::uniform:
      return "uniform";
    case Scheme::fcq:
      return "fcq";
  }
  return "?";
}

std::size_t element_count(std::span<const std::size_t> shape) noexcept {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

QuantizedTensor quantize_uniform(const FloatTensor& tensor, int bitwidth) {
  if (bitwidth != 8 && bitwidth != 16) throw DomainError("uniform quantization supports 8 or 16 bits");
  if (tensor.values.empty()) throw DomainError("cannot quantize empty tensor '" + tensor.name + "'");
  if (tensor.values.size() != element_count(tensor.shape)) {
    throw DomainError("tensor '" + tensor.name + "' has " + std::to_string(tensor.values.size()) +
                      " values but its shape holds " + std::to_string(element_count(tensor.shape)));
  }
  for (double v : tensor.values) {
    if (!std::isfinite(v)) throw DomainError("tensor '" + tensor.name + "' contains a non-finite value");
  }

  const auto [lo, hi] = std::minmax_element(tensor.values.begin(), tensor.values.end());
  const double qmax = static_cast<double>((1 << bitwidth) - 1);

  QuantizedTensor q;
  q.name = tensor.name;
  q.shape = tensor.shape;
  q.scheme = Scheme::uniform;
  q.params.bitwidth = bitwidth;
  q.params.min = *lo;
  q.codes.resize(tensor.values.size());

  if (*hi == *lo) {
    q.params.scale = 1.0;
    q.params.zero_point = 0;
    std::fill(q.codes.begin(), q.codes.end(), 0);
    return q;
  }

  const double scale = (*hi - *lo) / qmax;
  const double zp = std::clamp(std::round(-*lo / scale), 0.0, qmax);
  q.params.scale = scale;
  q.params.zero_point = static_cast<std::int32_t>(zp);
  std::transform(tensor.values.begin(), tensor.values.end(), q.codes.begin(), [&](double x) {
    return static_cast<std::uint16_t>(std::clamp(std::round(x / scale) + zp, 0.0, qmax));
  });
  return q;
}

std::vector<double> dequantize(const QuantizedTensor& q) {
  std::vector<double> out(q.codes.size());
  std::transform(q.codes.begin(), q.codes.end(), out.begin(), [&](std::uint16_t c) {
    return (static_cast<double>(c) - q.params.zero_point) * q.params.scale;
  });
  return out;
}

bool is_constant_range(const QuantizedTensor& q) noexcept {
  // A non-degenerate tensor always maps its maximum to the top code, so
  // all-zero codes with unit scale can only come from a zero range.
  return q.params.scale == 1.0 && q.params.zero_point == 0 &&
         std::all_of(q.codes.begin(), q.codes.end(), [](std::uint16_t c) { return c == 0; });
}

std::vector<double> reconstruct(const QuantizedTensor& q) {
  if (!q.codes.empty() && is_constant_range(q)) return std::vector<double>(q.codes.size(), q.params.min);
  return dequantize(q);
}

QuantizedTensor apply_fcq(const QuantizedTensor& q) {
  if (q.params.bitwidth != 8) throw UnsupportedError("FCQ is only defined on the 8-bit code domain");
  const auto& table = FibbinaryTable::get(8);
  QuantizedTensor out = q;
  for (auto& c : out.codes) c = static_cast<std::uint16_t>(nearest_fibbinary(c, table));
  out.scheme = Scheme::fcq;
  return out;
}

double mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DomainError("mse shape mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  if (a.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

}  // namespace fibq
