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

#include <gtest/gtest.h>

#include <random>

#include "fibq/errors.hpp"
#include "hex_fixture.hpp"

namespace fibq {
namespace {

using testing::read_hex_fixture;

const AffineRecord kAffine{0.5, -1.0, 2};

ContainerTensor tensor(std::string name, DType dtype, std::vector<std::uint32_t> dims,
                       std::optional<AffineRecord> affine, std::vector<std::uint8_t> payload) {
  return ContainerTensor{std::move(name), dtype, std::move(dims), affine, std::move(payload)};
}

struct Fixture {
  const char* file;
  Container expected;
};

std::vector<Fixture> fixtures() {
  return {
      {"empty.hex", {}},
      {"u8_tensor.hex", {{tensor("w", DType::u8, {2}, kAffine, {3, 7})}}},
      {"float32_tensor.hex", {{tensor("b", DType::float32, {2}, std::nullopt, {0, 0, 0x80, 0x3f, 0, 0, 0, 0xc0})}}},
      {"u16_tensor.hex", {{tensor("h", DType::u16, {1, 2}, AffineRecord{0.25, 0.0, 256}, {0x01, 0x00, 0x34, 0x12})}}},
      {"fib_index_tensor.hex", {{tensor("w", DType::fib_index, {2}, kAffine, {0x03, 0x60})}}},
      {"word_count_tensor.hex", {{tensor("w", DType::word_count, {2}, kAffine, {5, 7, 1, 0, 0, 0, 0x4c})}}},
  };
}

TEST(ContainerTest, GoldenFixturesRoundTrip) {
  for (const auto& f : fixtures()) {
    const auto bytes = read_hex_fixture(f.file);
    EXPECT_EQ(read_container(bytes), f.expected) << f.file;
    EXPECT_EQ(write_container(f.expected), bytes) << f.file;
  }
  EXPECT_EQ(read_hex_fixture("empty.hex").size(), 9U);
}

TEST(ContainerTest, TypedViewsOfFixtures) {
  const auto u8 = read_container(read_hex_fixture("u8_tensor.hex")).tensors.at(0);
  const auto q = to_quantized(u8);
  EXPECT_EQ(q.codes, (std::vector<std::uint16_t>{3, 7}));
  EXPECT_EQ(q.params.zero_point, 2);
  EXPECT_EQ(q.params.scale, 0.5);
  EXPECT_EQ(q.params.min, -1.0);

  const auto f = to_float_tensor(read_container(read_hex_fixture("float32_tensor.hex")).tensors.at(0));
  EXPECT_EQ(f.values, (std::vector<double>{1.0, -2.0}));

  const auto h = to_quantized(read_container(read_hex_fixture("u16_tensor.hex")).tensors.at(0));
  EXPECT_EQ(h.codes, (std::vector<std::uint16_t>{1, 0x1234}));
  EXPECT_EQ(h.params.bitwidth, 16);

  const auto idx = to_quantized(read_container(read_hex_fixture("fib_index_tensor.hex")).tensors.at(0));
  EXPECT_EQ(idx.codes, (std::vector<std::uint16_t>{0, 170}));
  EXPECT_EQ(idx.scheme, Scheme::fcq);

  const auto wc = to_quantized(read_container(read_hex_fixture("word_count_tensor.hex")).tensors.at(0));
  EXPECT_EQ(wc.codes, (std::vector<std::uint16_t>{8, 21}));
}

TEST(ContainerTest, BuildersMatchFixtures) {
  QuantizedTensor q;
  q.name = "w";
  q.shape = {2};
  q.params = {0.5, 2, 8, -1.0};
  q.codes = {3, 7};
  EXPECT_EQ(write_container({{make_code_tensor(q)}}), read_hex_fixture("u8_tensor.hex"));

  q.codes = {0, 170};
  EXPECT_EQ(write_container({{make_index_tensor(q)}}), read_hex_fixture("fib_index_tensor.hex"));

  q.codes = {8, 21};
  const auto seq = word_length_compress(q.codes);
  EXPECT_EQ(write_container({{make_word_count_tensor(q, word_count_compress(seq, 5, 7))}}),
            read_hex_fixture("word_count_tensor.hex"));

  EXPECT_EQ(write_container({{make_float_tensor({"b", {2}, {1.0, -2.0}})}}), read_hex_fixture("float32_tensor.hex"));
}

TEST(ContainerTest, StructuredErrors) {
  auto offset_of = [](std::vector<std::uint8_t> bytes) -> long {
    try {
      read_container(bytes);
    } catch (const ParseError& e) {
      return static_cast<long>(e.offset());
    }
    return -1;
  };
  auto good = read_hex_fixture("u8_tensor.hex");

  auto bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(offset_of(bad_magic), 0);

  auto bad_version = good;
  bad_version[4] = 2;
  EXPECT_EQ(offset_of(bad_version), 4);

  auto bad_dtype = good;
  bad_dtype[12] = 9;
  EXPECT_EQ(offset_of(bad_dtype), 12);

  auto bad_dims = good;
  bad_dims[14] = 3;  // dims (3) but two payload octets
  EXPECT_EQ(offset_of(bad_dims), 38);

  auto trailing = good;
  trailing.push_back(0);
  EXPECT_EQ(offset_of(trailing), static_cast<long>(good.size()));

  auto bad_zp = good;
  bad_zp[35] = 0x01;  // zero point 258 for u8 codes
  EXPECT_EQ(offset_of(bad_zp), 18);

  auto dup = read_hex_fixture("u8_tensor.hex");
  dup[5] = 2;
  dup.insert(dup.end(), good.begin() + 9, good.end());
  EXPECT_EQ(offset_of(dup), static_cast<long>(good.size()));

  auto wc = read_hex_fixture("word_count_tensor.hex");
  wc.back() = 0x45;  // literal equal to A
  EXPECT_GT(offset_of(wc), 0);

  auto idx = read_hex_fixture("fib_index_tensor.hex");
  idx.back() = 0x61;  // non-zero padding
  EXPECT_GT(offset_of(idx), 0);
}

TEST(ContainerTest, WriterRejectsInvalidContainers) {
  Container dup{{tensor("w", DType::u8, {1}, kAffine, {1}), tensor("w", DType::u8, {1}, kAffine, {1})}};
  EXPECT_THROW(write_container(dup), DomainError);
  Container no_affine{{tensor("w", DType::u8, {1}, std::nullopt, {1})}};
  EXPECT_THROW(write_container(no_affine), DomainError);
  Container short_payload{{tensor("w", DType::u8, {3}, kAffine, {1})}};
  EXPECT_THROW(write_container(short_payload), ParseError);
}

TEST(ContainerTest, TruncationsAlwaysFailWithParseError) {
  for (const auto& f : fixtures()) {
    const auto bytes = read_hex_fixture(f.file);
    for (std::size_t len = 0; len < bytes.size(); ++len) {
      EXPECT_THROW(read_container(std::span(bytes).first(len)), ParseError) << f.file << " len=" << len;
    }
  }
}

TEST(ContainerTest, ByteFlipsNeverEscapeAsOtherErrors) {
  const auto bytes = read_hex_fixture("word_count_tensor.hex");
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> pos(0, bytes.size() - 1);
  std::uniform_int_distribution<int> val(0, 255);
  for (int i = 0; i < 3000; ++i) {
    auto mutated = bytes;
    mutated[pos(rng)] = static_cast<std::uint8_t>(val(rng));
    try {
      const auto c = read_container(mutated);
      EXPECT_EQ(read_container(write_container(c)), c);
    } catch (const ParseError&) {
    }
  }
}

TEST(ContainerTest, BiasNames) {
  EXPECT_TRUE(is_bias_name("layer0.bias"));
  EXPECT_TRUE(is_bias_name("bias"));
  EXPECT_FALSE(is_bias_name("layer0.weight"));
  EXPECT_FALSE(is_bias_name("bias.weight"));
}

}  // namespace
}  // namespace fibq
