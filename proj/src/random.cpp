#include "qkdr/random.hpp"

namespace qkdr {

RandomStream::RandomStream(const SeededGenerator& gen) noexcept {
  // Expand (seed, stream) into 256 bits of state with a SplitMix64 walk.
  // The stream label is folded into the starting point so distinct labels
  // yield unrelated walks even for equal seeds.
  std::uint64_t z = mix64(gen.seed() ^ mix64(gen.stream() + 0x632BE59BD9B4E019ULL));
  for (auto& word : s_) {
    z += 0x9E3779B97F4A7C15ULL;
    word = mix64(z);
  }
  // xoshiro256** requires a nonzero state; the all-zero case is unreachable
  // for any mix64 walk in practice but guard it anyway.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

}  // namespace qkdr
