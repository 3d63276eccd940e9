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

#include "fibq/container.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>

#include "fibq/errors.hpp"
#include "fibq/fibbinary.hpp"

namespace fibq {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'F', 'Q', 'Z', '1'};

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void uint(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v), 8); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    if (remaining() < n) throw ParseError(pos_, std::string("truncated ") + what);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint64_t uint(int bytes, const char* what) {
    auto s = take(static_cast<std::size_t>(bytes), what);
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(s[i]) << (8 * i);
    return v;
  }
  double f64(const char* what) { return std::bit_cast<double>(uint(8, what)); }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

std::uint64_t expected_payload(DType dtype, std::uint64_t n) {
  switch (dtype) {
    case DType::float32:
      return 4 * n;
    case DType::u8:
      return n;
    case DType::u16:
      return 2 * n;
    case DType::fib_index:
      return (6 * n + 7) / 8;
    case DType::word_count:
      break;
  }
  return 0;
}

std::uint32_t code_limit(DType dtype) { return dtype == DType::u16 ? 65536U : 256U; }

// Content checks shared by reader and typed accessors. Throws ParseError at
// `base` (payload start) on inconsistency.
void check_payload(const ContainerTensor& t, std::size_t base) {
  const std::uint64_t n = t.element_count();
  switch (t.dtype) {
    case DType::float32:
    case DType::u8:
    case DType::u16:
      if (t.payload.size() != expected_payload(t.dtype, n)) throw ParseError(base, "payload length does not match dims");
      return;
    case DType::fib_index: {
      if (t.payload.size() != expected_payload(t.dtype, n)) throw ParseError(base, "payload length does not match dims");
      const auto ranks = unpack_6bit(t.payload, n);
      for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (ranks[i] >= kRankCount) throw ParseError(base + i * 6 / 8, "fibbinary rank is not below 55");
      }
      const std::size_t used_bits = static_cast<std::size_t>(n) * 6;
      if (used_bits % 8 != 0 && (t.payload.back() & (0xFFU >> (used_bits % 8))) != 0) {
        throw ParseError(base + t.payload.size() - 1, "non-zero padding bits");
      }
      return;
    }
    case DType::word_count: {
      std::size_t consumed = 0;
      CompressedStream stream;
      try {
        stream = parse_stream(t.payload, consumed);
      } catch (const ParseError& e) {
        throw ParseError(base + e.offset(), "malformed word-count stream");
      }
      if (consumed != t.payload.size()) throw ParseError(base + consumed, "trailing bytes after word-count stream");
      try {
        if (word_count_decompress(stream).ranks.size() != n) {
          throw ParseError(base, "word-count stream length does not match dims");
        }
      } catch (const CorruptStreamError& e) {
        throw ParseError(base + kStreamHeaderBytes + e.offset(), e.what());
      }
      return;
    }
  }
}

void check_affine(const ContainerTensor& t, std::size_t at) {
  if (t.dtype == DType::float32) return;
  const auto& a = *t.affine;
  if (!(a.scale > 0.0) || !std::isfinite(a.scale) || !std::isfinite(a.min)) {
    throw ParseError(at, "affine scale must be positive and finite");
  }
  if (a.zero_point >= code_limit(t.dtype)) throw ParseError(at, "zero point outside the code range");
}

}  // namespace

const char* to_string(DType dtype) noexcept {
  switch (dtype) {
    case DType::float32:
      return "float32";
    case DType::u8:
      return "u8";
    case DType::u16:
      return "u16";
    case DType::fib_index:
      return "fib_index";
    case DType::word_count:
      return "word_count";
  }
  return "?";
}

std::uint64_t ContainerTensor::element_count() const noexcept {
  std::uint64_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

const ContainerTensor* Container::find(const std::string& name) const noexcept {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::vector<std::uint8_t> write_container(const Container& c) {
  ByteWriter w;
  w.bytes(kMagic);
  w.u8(kContainerVersion);
  w.uint(c.tensors.size(), 4);
  std::set<std::string> names;
  for (const auto& t : c.tensors) {
    if (!names.insert(t.name).second) throw DomainError("duplicate tensor name '" + t.name + "'");
    if (t.name.size() > std::numeric_limits<std::uint16_t>::max()) throw DomainError("tensor name too long");
    if (t.dims.size() > 255) throw DomainError("tensor rank above 255");
    if ((t.dtype == DType::float32) == t.affine.has_value()) {
      throw DomainError("tensor '" + t.name + "': affine parameters required exactly for quantized dtypes");
    }
    check_affine(t, 0);
    check_payload(t, 0);
    w.uint(t.name.size(), 2);
    w.bytes(std::span(reinterpret_cast<const std::uint8_t*>(t.name.data()), t.name.size()));
    w.u8(static_cast<std::uint8_t>(t.dtype));
    w.u8(static_cast<std::uint8_t>(t.dims.size()));
    for (auto d : t.dims) w.uint(d, 4);
    if (t.affine) {
      w.f64(t.affine->scale);
      w.f64(t.affine->min);
      w.uint(t.affine->zero_point, 4);
    }
    w.uint(t.payload.size(), 8);
    w.bytes(t.payload);
  }
  return w.take();
}

Container read_container(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const auto magic = r.take(4, "magic");
  if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) throw ParseError(0, "bad magic");
  const auto version = r.uint(1, "version");
  if (version != kContainerVersion) throw ParseError(4, "unsupported version " + std::to_string(version));
  const auto count = r.uint(4, "tensor count");

  Container c;
  std::set<std::string> names;
  for (std::uint64_t i = 0; i < count; ++i) {
    ContainerTensor t;
    const std::size_t name_at = r.offset();
    const auto name_len = r.uint(2, "name length");
    const auto name = r.take(name_len, "name");
    t.name.assign(name.begin(), name.end());
    if (!names.insert(t.name).second) throw ParseError(name_at, "duplicate tensor name '" + t.name + "'");

    const std::size_t dtype_at = r.offset();
    const auto dtype = r.uint(1, "dtype");
    if (dtype > static_cast<std::uint8_t>(DType::word_count)) {
      throw ParseError(dtype_at, "unknown dtype " + std::to_string(dtype));
    }
    t.dtype = static_cast<DType>(dtype);
    const auto rank = r.uint(1, "rank");
    for (std::uint64_t d = 0; d < rank; ++d) t.dims.push_back(static_cast<std::uint32_t>(r.uint(4, "dim")));

    if (t.dtype != DType::float32) {
      const std::size_t affine_at = r.offset();
      AffineRecord a;
      a.scale = r.f64("scale");
      a.min = r.f64("min");
      a.zero_point = static_cast<std::uint32_t>(r.uint(4, "zero point"));
      t.affine = a;
      check_affine(t, affine_at);
    }

    const std::size_t len_at = r.offset();
    const auto len = r.uint(8, "payload length");
    if (len > r.remaining()) throw ParseError(len_at, "payload length exceeds file size");
    if (t.dtype != DType::word_count) {
      // Guard the multiplication below against absurd dims.
      const std::uint64_t n = t.element_count();
      bool overflow = false;
      std::uint64_t acc = 1;
      for (auto d : t.dims) {
        if (d != 0 && acc > std::numeric_limits<std::uint64_t>::max() / 8 / d) overflow = true;
        acc *= d;
      }
      if (overflow || expected_payload(t.dtype, n) != len) throw ParseError(len_at, "payload length does not match dims");
    }
    const std::size_t payload_at = r.offset();
    const auto payload = r.take(static_cast<std::size_t>(len), "payload");
    t.payload.assign(payload.begin(), payload.end());
    check_payload(t, payload_at);
    c.tensors.push_back(std::move(t));
  }
  if (r.remaining() != 0) throw ParseError(r.offset(), "trailing bytes after last tensor");
  return c;
}

Container load_container(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return read_container(bytes);
}

void save_container(const Container& c, const std::string& path) {
  const auto bytes = write_container(c);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::ios_base::failure("failed writing '" + path + "'");
}

namespace {

std::vector<std::uint32_t> dims_of(const std::vector<std::size_t>& shape) {
  std::vector<std::uint32_t> dims;
  for (auto d : shape) {
    if (d > std::numeric_limits<std::uint32_t>::max()) throw DomainError("dimension exceeds 32 bits");
    dims.push_back(static_cast<std::uint32_t>(d));
  }
  return dims;
}

std::vector<std::size_t> shape_of(const std::vector<std::uint32_t>& dims) {
  return {dims.begin(), dims.end()};
}

AffineRecord record_of(const AffineParams& p) {
  return {p.scale, p.min, static_cast<std::uint32_t>(p.zero_point)};
}

}  // namespace

ContainerTensor make_float_tensor(const FloatTensor& t) {
  ContainerTensor c;
  c.name = t.name;
  c.dtype = DType::float32;
  c.dims = dims_of(t.shape);
  if (t.values.size() != c.element_count()) throw DomainError("tensor '" + t.name + "' size/shape mismatch");
  c.payload.reserve(4 * t.values.size());
  for (double v : t.values) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    for (int i = 0; i < 4; ++i) c.payload.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  return c;
}

FloatTensor to_float_tensor(const ContainerTensor& t) {
  if (t.dtype != DType::float32) throw DomainError("tensor '" + t.name + "' is not float32");
  FloatTensor f;
  f.name = t.name;
  f.shape = shape_of(t.dims);
  f.values.reserve(t.payload.size() / 4);
  for (std::size_t i = 0; i + 4 <= t.payload.size(); i += 4) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(t.payload[i + b]) << (8 * b);
    f.values.push_back(static_cast<double>(std::bit_cast<float>(bits)));
  }
  return f;
}

ContainerTensor make_code_tensor(const QuantizedTensor& q) {
  ContainerTensor c;
  c.name = q.name;
  c.dims = dims_of(q.shape);
  c.affine = record_of(q.params);
  if (q.params.bitwidth == 8) {
    c.dtype = DType::u8;
    for (auto code : q.codes) c.payload.push_back(static_cast<std::uint8_t>(code));
  } else if (q.params.bitwidth == 16) {
    c.dtype = DType::u16;
    for (auto code : q.codes) {
      c.payload.push_back(static_cast<std::uint8_t>(code));
      c.payload.push_back(static_cast<std::uint8_t>(code >> 8));
    }
  } else {
    throw DomainError("unsupported code bitwidth");
  }
  return c;
}

ContainerTensor make_index_tensor(const QuantizedTensor& q) {
  if (q.params.bitwidth != 8) throw DomainError("index packing needs 8-bit codes");
  ContainerTensor c;
  c.name = q.name;
  c.dtype = DType::fib_index;
  c.dims = dims_of(q.shape);
  c.affine = record_of(q.params);
  c.payload = pack_6bit(word_length_compress(q.codes, q.name).ranks);
  return c;
}

ContainerTensor make_word_count_tensor(const QuantizedTensor& q, const CompressedStream& stream) {
  if (q.params.bitwidth != 8) throw DomainError("word-count streams carry 8-bit codes");
  ContainerTensor c;
  c.name = q.name;
  c.dtype = DType::word_count;
  c.dims = dims_of(q.shape);
  c.affine = record_of(q.params);
  c.payload = serialize(stream);
  return c;
}

CompressedStream to_stream(const ContainerTensor& t) {
  if (t.dtype != DType::word_count) throw DomainError("tensor '" + t.name + "' is not a word-count stream");
  std::size_t consumed = 0;
  return parse_stream(t.payload, consumed);
}

QuantizedTensor to_quantized(const ContainerTensor& t) {
  if (t.dtype == DType::float32 || !t.affine) throw DomainError("tensor '" + t.name + "' is not quantized");
  QuantizedTensor q;
  q.name = t.name;
  q.shape = shape_of(t.dims);
  q.params.scale = t.affine->scale;
  q.params.min = t.affine->min;
  q.params.zero_point = static_cast<std::int32_t>(t.affine->zero_point);
  q.params.bitwidth = t.dtype == DType::u16 ? 16 : 8;
  q.scheme = Scheme::uniform;
  const auto n = static_cast<std::size_t>(t.element_count());
  switch (t.dtype) {
    case DType::u8:
      q.codes.assign(t.payload.begin(), t.payload.end());
      break;
    case DType::u16:
      for (std::size_t i = 0; i + 1 < t.payload.size(); i += 2) {
        q.codes.push_back(static_cast<std::uint16_t>(t.payload[i] | (t.payload[i + 1] << 8)));
      }
      break;
    case DType::fib_index: {
      IndexSequence seq{unpack_6bit(t.payload, n), t.name};
      q.codes = word_length_decompress(seq);
      q.scheme = Scheme::fcq;
      break;
    }
    case DType::word_count:
      q.codes = word_length_decompress(word_count_decompress(to_stream(t)));
      q.scheme = Scheme::fcq;
      break;
    case DType::float32:
      break;
  }
  return q;
}

bool is_bias_name(const std::string& name) noexcept {
  constexpr std::string_view suffix = "bias";
  return name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace fibq
