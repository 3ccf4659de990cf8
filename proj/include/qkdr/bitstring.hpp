#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qkdr/random.hpp"

namespace qkdr {

/// Fixed-length sequence of bits, densely stored 64 per word (LSB-first
/// within each word). Class invariant: unused bits of the final word are
/// zero, so whole-word operations (XOR, popcount, masked parity) need no
/// tail handling.
class BitString {
 public:
  BitString() = default;

  /// n zero bits.
  explicit BitString(std::size_t n) : words_((n + 63) / 64, 0), len_(n) {}

  /// Parse from a string of '0'/'1' characters (index 0 = first character).
  static BitString from_string(const std::string& s);

  /// Adopt raw words (LSB-first). Bits beyond n are cleared.
  static BitString from_words(std::vector<std::uint64_t> words, std::size_t n);

  [[nodiscard]] std::size_t length() const noexcept { return len_; }
  [[nodiscard]] bool empty() const noexcept { return len_ == 0; }

  [[nodiscard]] bool get(std::size_t i) const {
    check_index(i);
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }

  void set(std::size_t i, bool value) {
    check_index(i);
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  void flip(std::size_t i) {
    check_index(i);
    words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
  }

  /// Number of one bits.
  [[nodiscard]] std::size_t popcount() const noexcept;

  /// Bitwise XOR; lengths must match.
  [[nodiscard]] BitString operator^(const BitString& other) const;

  [[nodiscard]] const std::vector<std::uint64_t>& words() const noexcept {
    return words_;
  }

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  void check_index(std::size_t i) const;

  std::vector<std::uint64_t> words_;
  std::size_t len_ = 0;
};

/// n pseudo-random bits, each 0/1 with probability 1/2; a pure function of
/// (gen, n).
BitString generate_random_bits(const SeededGenerator& gen, std::size_t n);

/// Number of positions where a and b differ; lengths must match.
std::size_t hamming_distance(const BitString& a, const BitString& b);

/// Per-block parities: ceil(length/b) bits, bit i = XOR of block i's bits.
/// A final partial block is implicitly zero-padded (padding never changes
/// a parity). Requires b >= 2 and a nonempty input.
BitString block_parities(const BitString& bits, std::int64_t b);

/// k-bit linear hash: bit j is the parity of (bits AND mask_j) where the
/// masks are pseudo-random bit strings (each bit set with probability 1/2)
/// drawn from `gen`. Deterministic in (gen, bits, k) and linear over GF(2):
/// hash(x XOR y) = hash(x) XOR hash(y) for equal-length x, y.
BitString subset_parity_hash(const SeededGenerator& gen, const BitString& bits,
                             std::size_t k);

}  // namespace qkdr
