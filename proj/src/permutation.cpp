#include "qkdr/permutation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace qkdr {

namespace {

void check_size(std::size_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("permutation size exceeds 32-bit index range");
  }
}

/// Durstenfeld-shuffle arr[first, last).
void shuffle_range(std::vector<std::uint32_t>& arr, std::size_t first,
                   std::size_t last, RandomStream& rng) {
  for (std::size_t i = last - first; i > 1; --i) {
    const std::uint64_t j = rng.next_below(i);
    std::swap(arr[first + i - 1], arr[first + j]);
  }
}

}  // namespace

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.mapping.resize(mapping.size());
  for (std::size_t i = 0; i < mapping.size(); ++i) inv.mapping[mapping[i]] = i;
  return inv;
}

Permutation durstenfeld_permutation(const SeededGenerator& gen, std::size_t n) {
  check_size(n);
  Permutation perm;
  perm.mapping.resize(n);
  std::iota(perm.mapping.begin(), perm.mapping.end(), 0U);
  if (n < 2) return perm;
  RandomStream rng = gen.make_stream();
  shuffle_range(perm.mapping, 0, n, rng);
  return perm;
}

Permutation cache_friendly_permutation(const SeededGenerator& gen, std::size_t n,
                                       std::size_t window) {
  if (window < 2) {
    throw std::invalid_argument("cache_friendly_permutation: window must be >= 2");
  }
  check_size(n);
  if (window >= n) return durstenfeld_permutation(gen, n);

  // Work on the position array pos[j] = element sitting at index j; both
  // passes shuffle index ranges of pos, so an element's total displacement
  // is bounded by (h1 - 1) + (h2 - 1) = window - 1 < window.
  const std::size_t h1 = (window + 2) / 2;  // ceil((window + 1) / 2)
  const std::size_t h2 = window + 1 - h1;
  const std::size_t offset = h1 / 2;

  std::vector<std::uint32_t> pos(n);
  std::iota(pos.begin(), pos.end(), 0U);
  RandomStream rng = gen.make_stream();

  for (std::size_t start = 0; start < n; start += h1) {
    shuffle_range(pos, start, std::min(start + h1, n), rng);
  }
  // Second pass: ranges offset by half a first-pass range, so every
  // first-pass boundary lies inside a second-pass range and bits can cross.
  if (offset > 1) shuffle_range(pos, 0, std::min(offset, n), rng);
  for (std::size_t start = offset; start < n; start += h2) {
    const std::size_t end = std::min(start + h2, n);
    if (end - start > 1) shuffle_range(pos, start, end, rng);
  }

  Permutation perm;
  perm.mapping.resize(n);
  for (std::size_t dest = 0; dest < n; ++dest) perm.mapping[pos[dest]] = dest;
  return perm;
}

BitString apply_permutation(const BitString& bits, const Permutation& perm) {
  if (bits.length() != perm.size()) {
    throw std::invalid_argument("apply_permutation: length mismatch");
  }
  BitString out(bits.length());
  for (std::size_t i = 0; i < bits.length(); ++i) {
    if (bits.get(i)) out.set(perm.mapping[i], true);
  }
  return out;
}

}  // namespace qkdr
