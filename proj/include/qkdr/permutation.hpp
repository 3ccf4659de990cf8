#pragma once

#include <cstdint>
#include <vector>

#include "qkdr/bitstring.hpp"
#include "qkdr/random.hpp"

namespace qkdr {

/// A bijection on {0, ..., size-1}: mapping[i] is the destination index of
/// element i.
struct Permutation {
  std::vector<std::uint32_t> mapping;

  [[nodiscard]] std::size_t size() const noexcept { return mapping.size(); }

  /// The permutation sending mapping[i] back to i.
  [[nodiscard]] Permutation inverse() const;
};

/// Uniformly random permutation (Durstenfeld's in-place shuffle).
/// Deterministic in (gen, n).
Permutation durstenfeld_permutation(const SeededGenerator& gen, std::size_t n);

/// Locality-bounded permutation: |mapping[i] - i| < window for every i, so a
/// streaming consumer only ever touches a `window`-sized region at a time.
///
/// Construction: two passes of independent Durstenfeld shuffles over
/// consecutive index ranges. The first pass uses ranges of size
/// h1 = ceil((window+1)/2), the second uses ranges of size h2 = window+1-h1
/// offset by floor(h1/2), so elements can cross first-pass boundaries while
/// total displacement stays at most (h1-1)+(h2-1) = window-1. When
/// window >= n this reduces to a single full shuffle and the result is
/// exactly durstenfeld_permutation(gen, n).
///
/// Requires window >= 2.
Permutation cache_friendly_permutation(const SeededGenerator& gen, std::size_t n,
                                       std::size_t window);

/// Rearrange bits: output[mapping[i]] = input[i]. Lengths must match.
BitString apply_permutation(const BitString& bits, const Permutation& perm);

}  // namespace qkdr
