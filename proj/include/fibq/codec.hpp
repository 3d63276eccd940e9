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
#include <utility>
#include <vector>

namespace fibq {

using Rank = std::uint8_t;

/// Number of 8-bit fibbinary codes, and therefore of valid ranks.
inline constexpr Rank kRankCount = 55;

struct IndexSequence {
  std::vector<Rank> ranks;
  std::string source_tensor;

  bool operator==(const IndexSequence&) const = default;
};

/// Two-bit codeword tag (bits 1-2, bit 1 being the MSB of the octet).
enum class Tag : std::uint8_t {
  literal = 0b00,
  a_then_literal = 0b01,
  b_then_literal = 0b10,
  run = 0b11,
};

/// One 8-bit codeword of the word-count stream.
///
/// Literal-carrying tags hold a rank in the low six bits. RUN codewords hold
/// a last-symbol flag (bit 3: 0 = A, 1 = B), a mixed flag (bit 4) and either
/// a 4-bit count (pure run) or a 3-bit A count plus a 1-bit B count (mixed).
struct Codeword {
  std::uint8_t octet = 0;

  Tag tag() const noexcept { return static_cast<Tag>(octet >> 6); }
  std::uint8_t payload() const noexcept { return octet & 0x3F; }
  bool last_is_b() const noexcept { return (octet >> 5) & 1U; }
  bool mixed() const noexcept { return (octet >> 4) & 1U; }

  static Codeword literal(Tag tag, Rank rank) noexcept;
  static Codeword pure_run(bool symbol_is_b, unsigned count) noexcept;
  static Codeword mixed_run(bool last_is_b, unsigned a_count) noexcept;

  bool operator==(const Codeword&) const = default;
};

struct CompressedStream {
  Rank a_rank = 0;
  Rank b_rank = 1;
  std::vector<Codeword> codewords;

  bool operator==(const CompressedStream&) const = default;
};

/// Fig.-3 style accounting: CR = (UL * UB) / (CL * CB).
struct CompressionReport {
  std::uint64_t ul = 0;
  std::uint64_t ub = 8;
  std::uint64_t cl = 0;
  std::uint64_t cb = 8;
  double cr = 1.0;
};

IndexSequence word_length_compress(std::span<const std::uint16_t> codes, std::string source = {});
std::vector<std::uint16_t> word_length_decompress(const IndexSequence& seq);

/// Six bits per rank, MSB first, zero-padded to a whole octet.
std::vector<std::uint8_t> pack_6bit(std::span<const Rank> ranks);
std::vector<Rank> unpack_6bit(std::span<const std::uint8_t> octets, std::size_t count);

/// Most and second most frequent ranks across all sequences.
std::pair<Rank, Rank> choose_common(std::span<const IndexSequence> seqs);
std::pair<Rank, Rank> choose_common(const IndexSequence& seq);

CompressedStream word_count_compress(const IndexSequence& seq, Rank a_rank, Rank b_rank);
IndexSequence word_count_decompress(const CompressedStream& stream);

/// choose_common + word_count_compress. An empty sequence gets (A, B) = (0, 1).
CompressedStream compress_tensor(const IndexSequence& seq);

/// Tensors are grouped k at a time; each group shares one (A, B) and every
/// tensor keeps its own codeword stream.
std::vector<CompressedStream> compress_grouped(std::span<const IndexSequence> tensors, std::size_t k);

double compression_ratio(std::uint64_t ul, std::uint64_t ub, std::uint64_t cl, std::uint64_t cb);
CompressionReport make_report(std::uint64_t ul, std::uint64_t cl);

/// Wire framing: a_rank, b_rank, u32 LE codeword count, codewords.
inline constexpr std::size_t kStreamHeaderBytes = 6;
std::vector<std::uint8_t> serialize(const CompressedStream& stream);
/// Parses one stream from the front of `bytes`; `consumed` receives its size.
CompressedStream parse_stream(std::span<const std::uint8_t> bytes, std::size_t& consumed);

}  // namespace fibq
