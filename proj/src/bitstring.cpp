#include "qkdr/bitstring.hpp"

#include <bit>
#include <stdexcept>

namespace qkdr {

void BitString::check_index(std::size_t i) const {
  if (i >= len_) {
    throw std::out_of_range("BitString index " + std::to_string(i) +
                            " out of range for length " + std::to_string(len_));
  }
}

BitString BitString::from_string(const std::string& s) {
  BitString out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      out.set(i, true);
    else if (s[i] != '0')
      throw std::invalid_argument("BitString::from_string: expected '0' or '1'");
  }
  return out;
}

BitString BitString::from_words(std::vector<std::uint64_t> words, std::size_t n) {
  if (words.size() != (n + 63) / 64) {
    throw std::invalid_argument("BitString::from_words: word count mismatch");
  }
  BitString out;
  out.words_ = std::move(words);
  out.len_ = n;
  if (const std::size_t tail = n % 64; tail != 0 && !out.words_.empty()) {
    out.words_.back() &= (std::uint64_t{1} << tail) - 1;
  }
  return out;
}

std::size_t BitString::popcount() const noexcept {
  std::size_t total = 0;
  for (const std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

BitString BitString::operator^(const BitString& other) const {
  if (len_ != other.len_) {
    throw std::invalid_argument("BitString XOR: length mismatch");
  }
  BitString out(len_);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    out.words_[w] = words_[w] ^ other.words_[w];
  }
  return out;
}

std::string BitString::to_string() const {
  std::string s(len_, '0');
  for (std::size_t i = 0; i < len_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

BitString generate_random_bits(const SeededGenerator& gen, std::size_t n) {
  RandomStream rng = gen.make_stream();
  std::vector<std::uint64_t> words((n + 63) / 64);
  for (auto& w : words) w = rng.next_u64();
  return BitString::from_words(std::move(words), n);
}

std::size_t hamming_distance(const BitString& a, const BitString& b) {
  if (a.length() != b.length()) {
    throw std::invalid_argument("hamming_distance: length mismatch");
  }
  std::size_t total = 0;
  for (std::size_t w = 0; w < a.words().size(); ++w) {
    total += std::popcount(a.words()[w] ^ b.words()[w]);
  }
  return total;
}

BitString block_parities(const BitString& bits, std::int64_t b) {
  if (b < 2) throw std::invalid_argument("block_parities: blocksize must be >= 2");
  if (bits.length() == 0) {
    throw std::invalid_argument("block_parities: empty bit string");
  }
  const std::size_t n = bits.length();
  const std::size_t blocks = (n + static_cast<std::size_t>(b) - 1) /
                             static_cast<std::size_t>(b);
  BitString out(blocks);
  std::size_t i = 0;
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    bool parity = false;
    const std::size_t end = std::min(n, (blk + 1) * static_cast<std::size_t>(b));
    for (; i < end; ++i) parity ^= bits.get(i);
    if (parity) out.set(blk, true);
  }
  return out;
}

BitString subset_parity_hash(const SeededGenerator& gen, const BitString& bits,
                             std::size_t k) {
  BitString out(k);
  RandomStream rng = gen.make_stream();
  const auto& words = bits.words();
  for (std::size_t j = 0; j < k; ++j) {
    // Drawing full mask words is safe: the input's tail bits are zero, so
    // mask bits beyond the logical length never contribute.
    std::uint64_t acc = 0;
    for (const std::uint64_t w : words) acc ^= w & rng.next_u64();
    if (std::popcount(acc) & 1U) out.set(j, true);
  }
  return out;
}

}  // namespace qkdr
