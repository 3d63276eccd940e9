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
#include <ostream>
#include <string>
#include <vector>

#include "fibq/codec.hpp"
#include "fibq/container.hpp"

namespace fibq {

struct InventoryEntry {
  std::string name;
  DType dtype = DType::float32;
  std::uint64_t elements = 0;
  unsigned stored_bits = 0;          // per element as stored, 0 for word-count streams
  std::uint64_t compressed_octets = 0;  // codewords only, word-count streams
  std::uint64_t stored_total_bits = 0;
};

/// Storage of a container compared with plain 16-bit and 8-bit storage of
/// every element.
struct MemoryReport {
  std::vector<InventoryEntry> inventory;
  std::uint64_t total_16bit_bits = 0;
  std::uint64_t total_8bit_bits = 0;
  std::uint64_t total_compressed_bits = 0;
  double saving_vs_16b = 0.0;
  double saving_vs_8b = 0.0;
};

MemoryReport memory_report(const Container& c);

struct TensorCompression {
  std::string name;
  CompressionReport report;
  std::uint64_t header_octets = kStreamHeaderBytes;
};

/// Per word-count tensor reports plus their sum. The stream headers are
/// left out of CL; `effective_cr` adds them back.
struct ContainerCompression {
  std::vector<TensorCompression> tensors;
  CompressionReport total;
  double effective_cr = 1.0;
};

ContainerCompression compression_summary(const Container& c);

/// Structured `key=value` lines, one record per line, sorted by tensor name.
void print_compression(std::ostream& os, const ContainerCompression& s);
void print_memory(std::ostream& os, const MemoryReport& m);

/// Formats with two decimals, e.g. 1.588 -> "1.59".
std::string two_decimals(double v);

}  // namespace fibq
