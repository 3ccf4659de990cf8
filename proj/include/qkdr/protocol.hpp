#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qkdr/analysis.hpp"
#include "qkdr/bitstring.hpp"
#include "qkdr/random.hpp"

namespace qkdr {

/// Stream labels partitioning a seed into independent generators, so that
/// enabling or disabling one consumer never perturbs the randomness seen by
/// another.
namespace stream_label {
inline constexpr std::uint64_t permutation = 1;
inline constexpr std::uint64_t hash_mask = 2;
inline constexpr std::uint64_t channel_noise = 3;
inline constexpr std::uint64_t eve_tap = 4;
inline constexpr std::uint64_t source_bits = 5;
inline constexpr std::uint64_t privacy_amp = 6;
inline constexpr std::uint64_t session_seed = 7;
}  // namespace stream_label

/// Session parameters shared by both parties before the protocol starts.
struct SessionConfig {
  std::int64_t n0 = 1'000'000;   // initial bit count
  double p0 = 0.25;              // prior error probability
  std::uint64_t shared_seed = 1; // seeds every shared pseudo-random choice
  std::int64_t min_n = 64;       // below this many bits the process fails
  std::int64_t hash_bits = 64;   // verification hash width k
  double verify_trigger = 10.0;  // attach a hash to rounds once p < trigger/n
  double pe0 = 0.0;              // initial adversary fraction (0 = untracked)
  std::int64_t min_final = 128;  // minimum acceptable key length
  bool cache_friendly = false;   // locality-bounded permutations
  std::size_t window = std::size_t{1} << 16;  // permutation window (bits)
};

/// One executed round, as recorded identically by both parties.
struct RoundRecord {
  int index = 0;
  std::int64_t b = 0;
  std::int64_t n_before = 0;
  std::int64_t n_after = 0;
  std::int64_t bad_blocks = 0;
  std::int64_t bits_discarded = 0;         // n_before - n_after
  std::int64_t parity_bits_disclosed = 0;  // ceil(n_before / b)
  double p_before = 0.0;
  double p_after = 0.0;
  double pe_before = 0.0;
  double pe_after = 0.0;
  bool case_relations = false;  // adversary case in effect during the round

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

/// Running account of what the adversary may know.
struct EveLedger {
  EveParams eve = EveParams::from_pe(0.0);
  std::int64_t hash_bits_seen = 0;  // verification hash bits disclosed
};

/// Delta: bits of adversary information to remove in privacy amplification,
/// ceil(n_agreed * p_e) + hash_bits_seen.
std::int64_t compute_delta(const EveLedger& ledger, std::int64_t n_agreed);

enum class SessionStatus { success, failed_too_small, aborted };

struct SessionOutcome {
  SessionStatus status = SessionStatus::aborted;
  BitString key;  // Alice's final key (empty unless success)
  bool keys_identical = false;  // oracle: Alice's and Bob's keys compared
  std::vector<RoundRecord> rounds;
  std::int64_t delta = 0;
  std::int64_t classical_bits_total = 0;  // parities + all hash exchanges
  std::int64_t n_agreed = 0;              // length at successful verification
  int verify_attempts = 0;
  double final_p = 0.0;  // last shared estimate before verification
};

/// Observation points for tests and simulation harnesses; either hook may be
/// empty. Hooks receive both parties' current strings, which the protocol
/// itself never compares directly.
struct SessionHooks {
  std::function<void(const RoundRecord&, const BitString& alice,
                     const BitString& bob)>
      after_round;
  std::function<void(int attempt, bool matched, const BitString& alice,
                     const BitString& bob)>
      after_verify;
};

/// Run the full two-party reconciliation session. Both parties execute
/// identical steps from the shared seed; every decision (permutation,
/// blocksize, verification masks) is a function of shared_seed and the
/// exchanged parity/hash messages only, never of one party's private bits.
///
/// Round loop: while p >= 1/n, permute, exchange block parities, discard bad
/// blocks and the first bit of each good block, re-estimate p from the bad
/// fraction and advance it to the residual rate. Once p < trigger/n a
/// verification hash rides along with the parities; when the loop exits at
/// p < 1/n a standalone verification runs. A failed verification sets
/// p to 2/n and resumes the loop. Success triggers privacy amplification
/// (subset-parity hashing down to n_agreed - delta bits) and a final length
/// check against min_final.
SessionOutcome run_session(const BitString& alice_bits, const BitString& bob_bits,
                           const SessionConfig& config,
                           const SessionHooks& hooks = {});

// --- Message interface -----------------------------------------------------
// The classical channel carries three message types. Serialized layout
// (byte-exact, documented for reproducible transcripts):
//   ParityMsg: 0x01, round (u32 BE), bit-vector
//   HashMsg:   0x02, k (u32 BE), bit-vector
//   SeedMsg:   0x03, seed (u64 BE)
// where a bit-vector is its bit length (u64 BE) followed by ceil(len/8)
// payload bytes, bits packed MSB-first (bit i lives in byte i/8 at mask
// 0x80 >> (i % 8)).

struct ParityMsg {
  std::uint32_t round = 0;
  BitString parities;

  friend bool operator==(const ParityMsg&, const ParityMsg&) = default;
};

struct HashMsg {
  std::uint32_t k = 0;
  BitString bits;

  friend bool operator==(const HashMsg&, const HashMsg&) = default;
};

struct SeedMsg {
  std::uint64_t seed = 0;

  friend bool operator==(const SeedMsg&, const SeedMsg&) = default;
};

std::vector<std::uint8_t> serialize(const ParityMsg& msg);
std::vector<std::uint8_t> serialize(const HashMsg& msg);
std::vector<std::uint8_t> serialize(const SeedMsg& msg);

/// Parsers consume the whole buffer and throw std::invalid_argument on a
/// wrong tag, truncation, or trailing bytes.
ParityMsg parse_parity_msg(std::span<const std::uint8_t> bytes);
HashMsg parse_hash_msg(std::span<const std::uint8_t> bytes);
SeedMsg parse_seed_msg(std::span<const std::uint8_t> bytes);

}  // namespace qkdr
