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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fibq {

enum class Scheme { uniform, fcq };

const char* to_string(Scheme scheme) noexcept;

/// Unsigned affine mapping x = (code - zero_point) * scale.
///
/// `min` is the calibration minimum. It is only needed to reconstruct
/// constant tensors, which quantize to scale 1, zero point 0 and all-zero
/// codes.
struct AffineParams {
  double scale = 1.0;
  std::int32_t zero_point = 0;
  int bitwidth = 8;
  double min = 0.0;

  bool operator==(const AffineParams&) const = default;
};

struct FloatTensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> values;
};

struct QuantizedTensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<std::uint16_t> codes;
  AffineParams params;
  Scheme scheme = Scheme::uniform;

  bool operator==(const QuantizedTensor&) const = default;
};

std::size_t element_count(std::span<const std::size_t> shape) noexcept;

/// Per-tensor min/max calibration, half-away-from-zero rounding.
QuantizedTensor quantize_uniform(const FloatTensor& tensor, int bitwidth);

/// (code - zero_point) * scale for every element.
std::vector<double> dequantize(const QuantizedTensor& q);

/// Like dequantize, but restores the stored minimum for constant tensors.
std::vector<double> reconstruct(const QuantizedTensor& q);

/// True when `q` came from a zero-range tensor.
bool is_constant_range(const QuantizedTensor& q) noexcept;

/// Round every 8-bit code to its nearest fibbinary code.
QuantizedTensor apply_fcq(const QuantizedTensor& q);

double mse(std::span<const double> a, std::span<const double> b);

}  // namespace fibq
