#include "qkdr/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "qkdr/permutation.hpp"

namespace qkdr {

namespace {

constexpr std::uint8_t kTagParity = 0x01;
constexpr std::uint8_t kTagHash = 0x02;
constexpr std::uint8_t kTagSeed = 0x03;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  put_u32(out, static_cast<std::uint32_t>(v >> 32));
  put_u32(out, static_cast<std::uint32_t>(v));
}

void put_bits(std::vector<std::uint8_t>& out, const BitString& bits) {
  put_u64(out, bits.length());
  const std::size_t nbytes = (bits.length() + 7) / 8;
  const std::size_t base = out.size();
  out.resize(base + nbytes, 0);
  for (std::size_t i = 0; i < bits.length(); ++i) {
    if (bits.get(i))
      out[base + i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
  }
}

/// Strict big-endian reader over a message buffer; any structural defect
/// (truncation, wrong tag, nonzero padding, trailing bytes) throws.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> buf) : buf_(buf) {}

  std::uint8_t u8() {
    require(1);
    return buf_[off_++];
  }

  std::uint32_t u32() {
    require(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | buf_[off_++];
    return v;
  }

  std::uint64_t u64() {
    require(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | buf_[off_++];
    return v;
  }

  BitString bits() {
    const std::uint64_t len64 = u64();
    const auto len = static_cast<std::size_t>(len64);
    const std::size_t nbytes = len / 8 + (len % 8 != 0 ? 1 : 0);
    require(nbytes);
    BitString out(len);
    for (std::size_t i = 0; i < len; ++i) {
      if (buf_[off_ + i / 8] & (0x80U >> (i % 8))) out.set(i, true);
    }
    if (len % 8 != 0) {
      const std::uint8_t pad_mask = static_cast<std::uint8_t>(0xFFU >> (len % 8));
      if (buf_[off_ + nbytes - 1] & pad_mask)
        throw std::invalid_argument("message: nonzero bit-vector padding");
    }
    off_ += nbytes;
    return out;
  }

  void expect_tag(std::uint8_t tag) {
    if (u8() != tag) throw std::invalid_argument("message: unexpected tag");
  }

  void done() const {
    if (off_ != buf_.size())
      throw std::invalid_argument("message: trailing bytes");
  }

 private:
  void require(std::size_t k) const {
    if (buf_.size() - off_ < k)
      throw std::invalid_argument("message: truncated");
  }

  std::span<const std::uint8_t> buf_;
  std::size_t off_ = 0;
};

std::int64_t isqrt_floor(std::int64_t n) {
  if (n <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

struct Party {
  BitString bits;
};

struct RoundResult {
  RoundRecord record;
  bool attached = false;
  bool hashes_matched = false;
};

/// Keep every block that compared equal (minus its first bit); drop bad
/// blocks entirely. `diff` holds one bit per block, 1 = parity mismatch.
BitString discard_blocks(const BitString& bits, const BitString& diff,
                         std::int64_t b) {
  const std::size_t n = bits.length();
  const auto bb = static_cast<std::size_t>(b);
  std::size_t kept = 0;
  for (std::size_t blk = 0; blk < diff.length(); ++blk) {
    const std::size_t start = blk * bb;
    const std::size_t end = std::min(n, start + bb);
    if (!diff.get(blk)) kept += end - start - 1;
  }
  BitString out(kept);
  std::size_t w = 0;
  for (std::size_t blk = 0; blk < diff.length(); ++blk) {
    const std::size_t start = blk * bb;
    const std::size_t end = std::min(n, start + bb);
    if (diff.get(blk)) continue;
    for (std::size_t i = start + 1; i < end; ++i) {
      if (bits.get(i)) out.set(w + (i - start - 1), true);
    }
    w += end - start - 1;
  }
  return out;
}

}  // namespace

std::int64_t compute_delta(const EveLedger& ledger, std::int64_t n_agreed) {
  if (n_agreed < 0) throw std::invalid_argument("compute_delta: n_agreed < 0");
  const double known = std::ceil(static_cast<double>(n_agreed) * ledger.eve.p_e);
  return static_cast<std::int64_t>(known) + ledger.hash_bits_seen;
}

std::vector<std::uint8_t> serialize(const ParityMsg& msg) {
  std::vector<std::uint8_t> out;
  out.reserve(1 + 4 + 8 + (msg.parities.length() + 7) / 8);
  out.push_back(kTagParity);
  put_u32(out, msg.round);
  put_bits(out, msg.parities);
  return out;
}

std::vector<std::uint8_t> serialize(const HashMsg& msg) {
  std::vector<std::uint8_t> out;
  out.reserve(1 + 4 + 8 + (msg.bits.length() + 7) / 8);
  out.push_back(kTagHash);
  put_u32(out, msg.k);
  put_bits(out, msg.bits);
  return out;
}

std::vector<std::uint8_t> serialize(const SeedMsg& msg) {
  std::vector<std::uint8_t> out;
  out.reserve(1 + 8);
  out.push_back(kTagSeed);
  put_u64(out, msg.seed);
  return out;
}

ParityMsg parse_parity_msg(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.expect_tag(kTagParity);
  ParityMsg msg;
  msg.round = r.u32();
  msg.parities = r.bits();
  r.done();
  return msg;
}

HashMsg parse_hash_msg(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.expect_tag(kTagHash);
  HashMsg msg;
  msg.k = r.u32();
  msg.bits = r.bits();
  r.done();
  if (msg.bits.length() != msg.k)
    throw std::invalid_argument("message: hash width disagrees with payload");
  return msg;
}

SeedMsg parse_seed_msg(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.expect_tag(kTagSeed);
  SeedMsg msg;
  msg.seed = r.u64();
  r.done();
  return msg;
}

namespace {

void validate_config(const SessionConfig& config, std::size_t n_actual) {
  if (config.n0 < 1) throw std::invalid_argument("session: n0 must be >= 1");
  if (n_actual != static_cast<std::size_t>(config.n0))
    throw std::invalid_argument("session: n0 disagrees with the input length");
  if (!(config.p0 >= 0.0 && config.p0 <= 0.5))
    throw std::invalid_argument("session: p0 must lie in [0, 1/2]");
  if (config.hash_bits < 1)
    throw std::invalid_argument("session: hash_bits must be >= 1");
  if (!(config.verify_trigger > 0.0))
    throw std::invalid_argument("session: verify_trigger must be positive");
  if (config.min_n < 4)
    throw std::invalid_argument("session: min_n must be >= 4");
  if (config.min_final < 1)
    throw std::invalid_argument("session: min_final must be >= 1");
  if (!(config.pe0 >= 0.0 && config.pe0 < 1.0))
    throw std::invalid_argument("session: pe0 must lie in [0, 1)");
  if (config.cache_friendly && config.window < 2)
    throw std::invalid_argument("session: window must be >= 2");
}

}  // namespace

SessionOutcome run_session(const BitString& alice_bits, const BitString& bob_bits,
                           const SessionConfig& config,
                           const SessionHooks& hooks) {
  if (alice_bits.length() != bob_bits.length())
    throw std::invalid_argument("session: party strings differ in length");
  validate_config(config, alice_bits.length());

  const SeededGenerator root(config.shared_seed);
  const SeededGenerator perm_root = root.child(stream_label::permutation);
  const SeededGenerator hash_root = root.child(stream_label::hash_mask);

  Party alice{alice_bits};
  Party bob{bob_bits};
  std::int64_t n = config.n0;
  double p = config.p0;

  const bool track_eve = config.pe0 > 0.0;
  EveLedger ledger;
  ledger.eve = EveParams::from_pe(config.pe0);

  SessionOutcome out;
  int attempt = 0;
  int round_index = 0;
  bool verified = false;

  // One verification attempt: both parties hash their current string with the
  // attempt's shared masks and exchange the results over the wire. Each
  // attempt consumes a fresh mask set; reusing masks across attempts would let
  // earlier disclosures accumulate against the same subset parities.
  const auto exchange_hashes = [&]() -> bool {
    ++attempt;
    const SeededGenerator gen =
        hash_root.child(static_cast<std::uint64_t>(attempt));
    const auto k = static_cast<std::size_t>(config.hash_bits);
    const HashMsg from_alice = parse_hash_msg(serialize(
        HashMsg{static_cast<std::uint32_t>(k),
                subset_parity_hash(gen, alice.bits, k)}));
    const HashMsg from_bob = parse_hash_msg(serialize(
        HashMsg{static_cast<std::uint32_t>(k),
                subset_parity_hash(gen, bob.bits, k)}));
    ledger.hash_bits_seen += config.hash_bits;
    out.classical_bits_total += config.hash_bits;
    return from_alice.bits == from_bob.bits;
  };

  const auto fail_too_small = [&]() {
    out.status = SessionStatus::failed_too_small;
    out.n_agreed = 0;
    out.final_p = p;
    out.verify_attempts = attempt;
    out.delta = compute_delta(ledger, 0);
    return out;
  };

  while (!verified) {
    // Round loop: reconcile while the estimated error count p*n is at least
    // one. min_n guards every round execution, so the strings can never be
    // ground down to nothing.
    while (p * static_cast<double>(n) >= 1.0) {
      if (n < config.min_n) return fail_too_small();

      const std::int64_t b_max = std::max<std::int64_t>(2, isqrt_floor(n));
      const std::int64_t b = track_eve
                                 ? choose_blocksize_eve(p, ledger.eve, b_max)
                                 : optimal_blocksize(p, b_max);

      RoundResult rr;
      rr.record.index = round_index;
      rr.record.b = b;
      rr.record.n_before = n;
      rr.record.p_before = p;
      rr.record.pe_before = ledger.eve.p_e;
      rr.record.case_relations = ledger.eve.has_relations;

      // Shared permutation for this round.
      const SeededGenerator perm_gen =
          perm_root.child(static_cast<std::uint64_t>(round_index));
      const Permutation perm =
          config.cache_friendly
              ? cache_friendly_permutation(perm_gen, static_cast<std::size_t>(n),
                                           config.window)
              : durstenfeld_permutation(perm_gen, static_cast<std::size_t>(n));
      alice.bits = apply_permutation(alice.bits, perm);
      bob.bits = apply_permutation(bob.bits, perm);

      // Parity exchange over the wire.
      const auto round_u32 = static_cast<std::uint32_t>(round_index);
      const ParityMsg from_alice = parse_parity_msg(serialize(
          ParityMsg{round_u32, block_parities(alice.bits, b)}));
      const ParityMsg from_bob = parse_parity_msg(serialize(
          ParityMsg{round_u32, block_parities(bob.bits, b)}));
      const BitString diff = from_alice.parities ^ from_bob.parities;
      const auto blocks = static_cast<std::int64_t>(diff.length());
      out.classical_bits_total += blocks;

      // Once the error estimate is small enough, a verification hash of the
      // pre-discard strings rides along with the parities.
      rr.attached = p < config.verify_trigger / static_cast<double>(n);
      if (rr.attached) rr.hashes_matched = exchange_hashes();

      alice.bits = discard_blocks(alice.bits, diff, b);
      bob.bits = discard_blocks(bob.bits, diff, b);

      rr.record.bad_blocks = static_cast<std::int64_t>(diff.popcount());
      rr.record.n_after = static_cast<std::int64_t>(alice.bits.length());
      rr.record.bits_discarded = rr.record.n_before - rr.record.n_after;
      rr.record.parity_bits_disclosed = blocks;

      // Re-estimate p from the observed bad-block fraction, then advance it
      // past this round's discards to the residual rate.
      const double e_b =
          static_cast<double>(rr.record.bad_blocks) / static_cast<double>(blocks);
      rr.record.p_after = residual_error_prob(reestimate_p(e_b, b), b);

      if (track_eve) ledger.eve = eve_after_round(ledger.eve, b);
      rr.record.pe_after = ledger.eve.p_e;

      n = rr.record.n_after;
      p = rr.record.p_after;
      out.rounds.push_back(rr.record);
      ++round_index;

      if (hooks.after_round) hooks.after_round(rr.record, alice.bits, bob.bits);
      if (rr.attached) {
        if (hooks.after_verify)
          hooks.after_verify(attempt, rr.hashes_matched, alice.bits, bob.bits);
        if (rr.hashes_matched) {
          verified = true;
          break;
        }
        // The attached hash caught a surviving discrepancy: keep
        // reconciling with at least the post-failure error floor.
        p = std::max(p, 2.0 / static_cast<double>(std::max<std::int64_t>(n, 1)));
      }
    }
    if (verified) break;
    if (n < config.min_n) return fail_too_small();

    const bool matched = exchange_hashes();
    if (hooks.after_verify)
      hooks.after_verify(attempt, matched, alice.bits, bob.bits);
    if (matched) {
      verified = true;
    } else {
      // A failed check implies an even (hence >= 2) number of surviving
      // errors with high probability; resume reconciliation at that floor.
      p = 2.0 / static_cast<double>(n);
    }
  }

  out.n_agreed = n;
  out.final_p = p;
  out.verify_attempts = attempt;
  out.delta = compute_delta(ledger, n);

  const std::int64_t key_len = n - out.delta;
  if (key_len < config.min_final) {
    out.status = SessionStatus::aborted;
    return out;
  }

  // Privacy amplification: both parties hash down to key_len bits with the
  // shared subset-parity masks.
  const SeededGenerator pa_gen = root.child(stream_label::privacy_amp);
  const auto key_size = static_cast<std::size_t>(key_len);
  BitString key_alice = subset_parity_hash(pa_gen, alice.bits, key_size);
  BitString key_bob = subset_parity_hash(pa_gen, bob.bits, key_size);
  out.keys_identical = key_alice == key_bob;
  out.key = std::move(key_alice);
  out.status = SessionStatus::success;
  return out;
}

}  // namespace qkdr
