#pragma once

#include <array>
#include <cstdint>

namespace qkdr {

/// SplitMix64 finalizer: a high-quality 64-bit mixing function used to
/// derive generator states from (seed, stream) descriptors.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

class RandomStream;

/// Immutable descriptor of a deterministic random stream.
///
/// A SeededGenerator is a (seed, stream-label) pair. It does not hold any
/// generator state itself; call make_stream() to instantiate a RandomStream
/// positioned at the beginning of the stream. Identical descriptors always
/// produce identical output, on every platform.
///
/// child(label) derives a statistically independent sub-generator, so that
/// each consumer (permutations, hash masks, channel noise, ...) owns a
/// private stream and enabling one consumer never perturbs another.
class SeededGenerator {
 public:
  explicit SeededGenerator(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  /// Derive an independent generator identified by `label`.
  /// The derivation folds the current (seed, stream) into a fresh seed via
  /// mix64, so chains of child() calls never collide in practice.
  [[nodiscard]] SeededGenerator child(std::uint64_t label) const noexcept {
    const std::uint64_t folded =
        mix64(seed_ + 0x9E3779B97F4A7C15ULL * (stream_ + 1));
    return SeededGenerator(folded, label);
  }

  [[nodiscard]] RandomStream make_stream() const noexcept;

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

  friend bool operator==(const SeededGenerator&, const SeededGenerator&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// xoshiro256** generator instance (256-bit state), seeded from a
/// SeededGenerator descriptor via SplitMix64. Value-semantic and cheap to
/// copy; never shared between threads while being advanced.
class RandomStream {
 public:
  explicit RandomStream(const SeededGenerator& gen) noexcept;

  /// Next 64 uniformly random bits.
  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform integer in [0, bound), bound >= 1.
  /// Lemire's nearly-divisionless rejection method: unbiased and fast.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    using u128 = unsigned __int128;
    u128 m = static_cast<u128>(next_u64()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) {
        m = static_cast<u128>(next_u64()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// True with probability `prob`.
  bool next_bool(double prob) noexcept { return next_unit() < prob; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_;
};

inline RandomStream SeededGenerator::make_stream() const noexcept {
  return RandomStream(*this);
}

}  // namespace qkdr
