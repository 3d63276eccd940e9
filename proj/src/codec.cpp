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

#include "fibq/codec.hpp"

#include <algorithm>
#include <array>
#include <optional>

#include "fibq/errors.hpp"
#include "fibq/fibbinary.hpp"

namespace fibq {

namespace {

constexpr unsigned kMaxPureRun = 15;
constexpr unsigned kMaxMixedA = 7;

void check_rank(Rank r, std::size_t pos) {
  if (r >= kRankCount) {
    throw DomainError("rank " + std::to_string(r) + " at position " + std::to_string(pos) + " is not below 55");
  }
}

// Pending run over {A, B}. Only the shapes a single RUN codeword can hold are
// ever represented: X^c (c <= 15), A^n B and B A^n (n <= 7).
class RunBuffer {
 public:
  bool empty() const noexcept { return first_count_ == 0; }

  bool is_single(bool b) const noexcept { return first_count_ == 1 && !has_second_ && first_is_b_ == b; }

  // Returns false when `symbol_is_b` cannot be appended without leaving the
  // encodable shapes.
  bool try_append(bool symbol_is_b) noexcept {
    if (empty()) {
      first_is_b_ = symbol_is_b;
      first_count_ = 1;
      return true;
    }
    if (!has_second_) {
      if (symbol_is_b == first_is_b_) {
        if (first_count_ >= kMaxPureRun) return false;
        ++first_count_;
        return true;
      }
      // A^n then B, or a single B then A.
      const bool ok = first_is_b_ ? first_count_ == 1 : first_count_ <= kMaxMixedA;
      if (!ok) return false;
      has_second_ = true;
      second_count_ = 1;
      return true;
    }
    // Only B A^n can still grow.
    if (first_is_b_ && !symbol_is_b && second_count_ < kMaxMixedA) {
      ++second_count_;
      return true;
    }
    return false;
  }

  Codeword take() noexcept {
    Codeword cw = has_second_
                      ? (first_is_b_ ? Codeword::mixed_run(false, second_count_)
                                     : Codeword::mixed_run(true, first_count_))
                      : Codeword::pure_run(first_is_b_, first_count_);
    *this = RunBuffer{};
    return cw;
  }

 private:
  bool first_is_b_ = false;
  unsigned first_count_ = 0;
  bool has_second_ = false;
  unsigned second_count_ = 0;
};

}  // namespace

Codeword Codeword::literal(Tag tag, Rank rank) noexcept {
  return Codeword{static_cast<std::uint8_t>((static_cast<unsigned>(tag) << 6) | (rank & 0x3F))};
}

Codeword Codeword::pure_run(bool symbol_is_b, unsigned count) noexcept {
  return Codeword{static_cast<std::uint8_t>(0xC0 | (symbol_is_b ? 0x20 : 0) | (count & 0x0F))};
}

Codeword Codeword::mixed_run(bool last_is_b, unsigned a_count) noexcept {
  return Codeword{static_cast<std::uint8_t>(0xD0 | (last_is_b ? 0x20 : 0) | ((a_count & 0x07) << 1) | 0x01)};
}

IndexSequence word_length_compress(std::span<const std::uint16_t> codes, std::string source) {
  const auto& table = FibbinaryTable::get(8);
  IndexSequence seq;
  seq.source_tensor = std::move(source);
  seq.ranks.reserve(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const int rank = table.index_of(codes[i]);
    if (rank < 0) {
      throw DomainError("code " + std::to_string(codes[i]) + " at position " + std::to_string(i) +
                        (seq.source_tensor.empty() ? "" : " of '" + seq.source_tensor + "'") +
                        " is not an 8-bit fibbinary value");
    }
    seq.ranks.push_back(static_cast<Rank>(rank));
  }
  return seq;
}

std::vector<std::uint16_t> word_length_decompress(const IndexSequence& seq) {
  const auto& table = FibbinaryTable::get(8);
  std::vector<std::uint16_t> codes;
  codes.reserve(seq.ranks.size());
  for (std::size_t i = 0; i < seq.ranks.size(); ++i) {
    check_rank(seq.ranks[i], i);
    codes.push_back(static_cast<std::uint16_t>(table[seq.ranks[i]]));
  }
  return codes;
}

std::vector<std::uint8_t> pack_6bit(std::span<const Rank> ranks) {
  std::vector<std::uint8_t> out((ranks.size() * 6 + 7) / 8, 0);
  std::size_t bit = 0;
  for (Rank r : ranks) {
    for (int b = 5; b >= 0; --b, ++bit) {
      if ((r >> b) & 1U) out[bit / 8] |= static_cast<std::uint8_t>(0x80U >> (bit % 8));
    }
  }
  return out;
}

std::vector<Rank> unpack_6bit(std::span<const std::uint8_t> octets, std::size_t count) {
  if (octets.size() * 8 < count * 6) throw DomainError("packed buffer too short");
  std::vector<Rank> out(count, 0);
  std::size_t bit = 0;
  for (auto& r : out) {
    for (int b = 0; b < 6; ++b, ++bit) {
      r = static_cast<Rank>((r << 1) | ((octets[bit / 8] >> (7 - bit % 8)) & 1U));
    }
  }
  return out;
}

std::pair<Rank, Rank> choose_common(std::span<const IndexSequence> seqs) {
  std::array<std::uint64_t, kRankCount> counts{};
  std::size_t total = 0;
  for (const auto& s : seqs) {
    for (std::size_t i = 0; i < s.ranks.size(); ++i) {
      check_rank(s.ranks[i], i);
      ++counts[s.ranks[i]];
    }
    total += s.ranks.size();
  }
  if (total == 0) throw DomainError("choose_common needs at least one rank");

  // Highest count first, smaller rank on ties.
  auto better = [&](Rank x, Rank y) { return counts[x] > counts[y] || (counts[x] == counts[y] && x < y); };
  Rank a = 0;
  for (Rank r = 1; r < kRankCount; ++r) {
    if (better(r, a)) a = r;
  }
  std::optional<Rank> b;
  for (Rank r = 0; r < kRankCount; ++r) {
    if (r == a) continue;
    if (!b || better(r, *b)) b = r;
  }
  // With a single distinct rank every other count is zero, so the loop above
  // already lands on the smallest rank != a.
  return {a, *b};
}

std::pair<Rank, Rank> choose_common(const IndexSequence& seq) { return choose_common(std::span(&seq, 1)); }

CompressedStream word_count_compress(const IndexSequence& seq, Rank a_rank, Rank b_rank) {
  check_rank(a_rank, 0);
  check_rank(b_rank, 0);
  if (a_rank == b_rank) throw DomainError("A and B must be distinct ranks");

  CompressedStream out;
  out.a_rank = a_rank;
  out.b_rank = b_rank;
  auto& cws = out.codewords;
  cws.reserve(seq.ranks.size());

  RunBuffer run;
  for (std::size_t i = 0; i < seq.ranks.size(); ++i) {
    const Rank r = seq.ranks[i];
    check_rank(r, i);
    if (r == a_rank || r == b_rank) {
      const bool is_b = r == b_rank;
      if (!run.try_append(is_b)) {
        cws.push_back(run.take());
        run.try_append(is_b);
      }
      continue;
    }
    if (run.is_single(false)) {
      cws.push_back(Codeword::literal(Tag::a_then_literal, r));
      run = RunBuffer{};
    } else if (run.is_single(true)) {
      cws.push_back(Codeword::literal(Tag::b_then_literal, r));
      run = RunBuffer{};
    } else {
      if (!run.empty()) cws.push_back(run.take());
      cws.push_back(Codeword::literal(Tag::literal, r));
    }
  }
  if (!run.empty()) cws.push_back(run.take());
  return out;
}

IndexSequence word_count_decompress(const CompressedStream& stream) {
  const Rank a = stream.a_rank;
  const Rank b = stream.b_rank;
  if (a >= kRankCount || b >= kRankCount) throw CorruptStreamError(0, "header rank is not below 55");
  if (a == b) throw CorruptStreamError(0, "header ranks A and B are equal");

  IndexSequence out;
  out.ranks.reserve(stream.codewords.size() * 2);
  for (std::size_t i = 0; i < stream.codewords.size(); ++i) {
    const Codeword cw = stream.codewords[i];
    if (cw.tag() != Tag::run) {
      const Rank lit = cw.payload();
      if (lit >= kRankCount) throw CorruptStreamError(i, "literal rank " + std::to_string(lit) + " is not below 55");
      if (lit == a || lit == b) throw CorruptStreamError(i, "literal equals A or B");
      if (cw.tag() == Tag::a_then_literal) out.ranks.push_back(a);
      if (cw.tag() == Tag::b_then_literal) out.ranks.push_back(b);
      out.ranks.push_back(lit);
      continue;
    }
    if (!cw.mixed()) {
      const unsigned count = cw.octet & 0x0F;
      if (count == 0) throw CorruptStreamError(i, "run with count 0");
      out.ranks.insert(out.ranks.end(), count, cw.last_is_b() ? b : a);
      continue;
    }
    const unsigned n = (cw.octet >> 1) & 0x07;
    const unsigned m = cw.octet & 0x01;
    if (n == 0 || m == 0) throw CorruptStreamError(i, "mixed run needs n >= 1 and m = 1");
    if (cw.last_is_b()) {
      out.ranks.insert(out.ranks.end(), n, a);
      out.ranks.push_back(b);
    } else {
      out.ranks.push_back(b);
      out.ranks.insert(out.ranks.end(), n, a);
    }
  }
  return out;
}

CompressedStream compress_tensor(const IndexSequence& seq) {
  if (seq.ranks.empty()) return word_count_compress(seq, 0, 1);
  const auto [a, b] = choose_common(seq);
  return word_count_compress(seq, a, b);
}

std::vector<CompressedStream> compress_grouped(std::span<const IndexSequence> tensors, std::size_t k) {
  if (k == 0) throw DomainError("group size must be at least 1");
  std::vector<CompressedStream> out;
  out.reserve(tensors.size());
  for (std::size_t start = 0; start < tensors.size(); start += k) {
    const auto group = tensors.subspan(start, std::min(k, tensors.size() - start));
    const bool any = std::any_of(group.begin(), group.end(), [](const auto& s) { return !s.ranks.empty(); });
    const auto [a, b] = any ? choose_common(group) : std::pair<Rank, Rank>{0, 1};
    for (const auto& s : group) out.push_back(word_count_compress(s, a, b));
  }
  return out;
}

double compression_ratio(std::uint64_t ul, std::uint64_t ub, std::uint64_t cl, std::uint64_t cb) {
  if (cl == 0 || cb == 0) throw DomainError("compressed size must be positive");
  return (static_cast<double>(ul) * static_cast<double>(ub)) / (static_cast<double>(cl) * static_cast<double>(cb));
}

CompressionReport make_report(std::uint64_t ul, std::uint64_t cl) {
  CompressionReport r;
  r.ul = ul;
  r.cl = cl;
  r.cr = cl == 0 ? 1.0 : compression_ratio(ul, r.ub, cl, r.cb);
  return r;
}

std::vector<std::uint8_t> serialize(const CompressedStream& stream) {
  const auto n = static_cast<std::uint32_t>(stream.codewords.size());
  std::vector<std::uint8_t> out;
  out.reserve(kStreamHeaderBytes + n);
  out.push_back(stream.a_rank);
  out.push_back(stream.b_rank);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
  for (const auto& cw : stream.codewords) out.push_back(cw.octet);
  return out;
}

CompressedStream parse_stream(std::span<const std::uint8_t> bytes, std::size_t& consumed) {
  if (bytes.size() < kStreamHeaderBytes) throw ParseError(bytes.size(), "truncated stream header");
  CompressedStream s;
  s.a_rank = bytes[0];
  s.b_rank = bytes[1];
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) n |= static_cast<std::uint32_t>(bytes[2 + i]) << (8 * i);
  if (bytes.size() - kStreamHeaderBytes < n) throw ParseError(bytes.size(), "truncated codewords");
  s.codewords.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) s.codewords.push_back(Codeword{bytes[kStreamHeaderBytes + i]});
  consumed = kStreamHeaderBytes + n;
  return s;
}

}  // namespace fibq
