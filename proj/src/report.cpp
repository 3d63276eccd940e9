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

#include "fibq/report.hpp"

#include <algorithm>
#include <cstdio>

namespace fibq {

MemoryReport memory_report(const Container& c) {
  MemoryReport m;
  for (const auto& t : c.tensors) {
    InventoryEntry e;
    e.name = t.name;
    e.dtype = t.dtype;
    e.elements = t.element_count();
    switch (t.dtype) {
      case DType::float32:
        e.stored_bits = 32;
        break;
      case DType::u8:
        e.stored_bits = 8;
        break;
      case DType::u16:
        e.stored_bits = 16;
        break;
      case DType::fib_index:
        e.stored_bits = 6;
        break;
      case DType::word_count:
        e.compressed_octets = to_stream(t).codewords.size();
        break;
    }
    e.stored_total_bits = t.dtype == DType::word_count ? 8 * e.compressed_octets : e.elements * e.stored_bits;
    m.total_16bit_bits += 16 * e.elements;
    m.total_8bit_bits += 8 * e.elements;
    m.total_compressed_bits += e.stored_total_bits;
    m.inventory.push_back(std::move(e));
  }
  std::sort(m.inventory.begin(), m.inventory.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  if (m.total_16bit_bits > 0) {
    m.saving_vs_16b = 1.0 - static_cast<double>(m.total_compressed_bits) / static_cast<double>(m.total_16bit_bits);
    m.saving_vs_8b = 1.0 - static_cast<double>(m.total_compressed_bits) / static_cast<double>(m.total_8bit_bits);
  }
  return m;
}

ContainerCompression compression_summary(const Container& c) {
  ContainerCompression s;
  std::uint64_t ul = 0, cl = 0, headers = 0;
  for (const auto& t : c.tensors) {
    if (t.dtype != DType::word_count) continue;
    TensorCompression tc;
    tc.name = t.name;
    tc.report = make_report(t.element_count(), to_stream(t).codewords.size());
    ul += tc.report.ul;
    cl += tc.report.cl;
    headers += tc.header_octets;
    s.tensors.push_back(std::move(tc));
  }
  std::sort(s.tensors.begin(), s.tensors.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  s.total = make_report(ul, cl);
  s.effective_cr = cl + headers == 0 ? 1.0 : compression_ratio(ul, 8, cl + headers, 8);
  return s;
}

std::string two_decimals(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void print_compression(std::ostream& os, const ContainerCompression& s) {
  for (const auto& t : s.tensors) {
    const auto& r = t.report;
    os << "compression tensor=" << t.name << " UL=" << r.ul << " UB=" << r.ub << " CL=" << r.cl << " CB=" << r.cb
       << " CR=" << two_decimals(r.cr) << " cr_exact=" << r.cr << "\n";
  }
  const auto& r = s.total;
  os << "compression_total tensors=" << s.tensors.size() << " UL=" << r.ul << " UB=" << r.ub << " CL=" << r.cl
     << " CB=" << r.cb << " CR=" << two_decimals(r.cr) << " cr_exact=" << r.cr
     << " effective_CR=" << two_decimals(s.effective_cr) << "\n";
}

void print_memory(std::ostream& os, const MemoryReport& m) {
  for (const auto& e : m.inventory) {
    os << "memory tensor=" << e.name << " dtype=" << to_string(e.dtype) << " elements=" << e.elements
       << " stored_bits=" << e.stored_bits << " compressed_octets=" << e.compressed_octets
       << " total_bits=" << e.stored_total_bits << "\n";
  }
  os << "memory_total bits_16=" << m.total_16bit_bits << " bits_8=" << m.total_8bit_bits
     << " bits_stored=" << m.total_compressed_bits << " saving_vs_16b=" << m.saving_vs_16b
     << " saving_vs_8b=" << m.saving_vs_8b << "\n";
}

}  // namespace fibq
