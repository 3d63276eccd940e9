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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fibq/codec.hpp"
#include "fibq/quantizer.hpp"

namespace fibq {

enum class DType : std::uint8_t {
  float32 = 0,
  u8 = 1,
  u16 = 2,
  fib_index = 3,   // 6-bit packed ranks of 8-bit fibbinary codes
  word_count = 4,  // serialized CompressedStream
};

const char* to_string(DType dtype) noexcept;

/// Affine parameters as stored on disk.
struct AffineRecord {
  double scale = 1.0;
  double min = 0.0;
  std::uint32_t zero_point = 0;

  bool operator==(const AffineRecord&) const = default;
};

struct ContainerTensor {
  std::string name;
  DType dtype = DType::float32;
  std::vector<std::uint32_t> dims;
  std::optional<AffineRecord> affine;  // present for every dtype except float32
  std::vector<std::uint8_t> payload;

  std::uint64_t element_count() const noexcept;

  bool operator==(const ContainerTensor&) const = default;
};

/// "FQZ1" tensor container; integers are little-endian throughout.
struct Container {
  std::vector<ContainerTensor> tensors;

  const ContainerTensor* find(const std::string& name) const noexcept;

  bool operator==(const Container&) const = default;
};

inline constexpr std::uint8_t kContainerVersion = 1;

std::vector<std::uint8_t> write_container(const Container& c);

/// Throws ParseError with the byte offset of the first problem.
Container read_container(std::span<const std::uint8_t> bytes);

Container load_container(const std::string& path);
void save_container(const Container& c, const std::string& path);

// Typed views.
ContainerTensor make_float_tensor(const FloatTensor& t);
FloatTensor to_float_tensor(const ContainerTensor& t);

/// u8 or u16 depending on the code bitwidth.
ContainerTensor make_code_tensor(const QuantizedTensor& q);
ContainerTensor make_index_tensor(const QuantizedTensor& q);
ContainerTensor make_word_count_tensor(const QuantizedTensor& q, const CompressedStream& stream);

/// Decodes any non-float dtype back to codes. fib_index and word_count
/// tensors come back tagged FCQ, u8 and u16 tensors as uniform.
QuantizedTensor to_quantized(const ContainerTensor& t);
CompressedStream to_stream(const ContainerTensor& t);

/// Names ending in "bias" are biases; everything else is a weight tensor.
bool is_bias_name(const std::string& name) noexcept;

}  // namespace fibq
