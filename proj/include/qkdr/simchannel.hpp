#pragma once

#include <cstdint>
#include <vector>

#include "qkdr/bitstring.hpp"
#include "qkdr/protocol.hpp"
#include "qkdr/random.hpp"

namespace qkdr {

/// Pass bits through a binary symmetric channel: each bit is flipped
/// independently with probability p (0 <= p <= 1/2). Deterministic in gen.
BitString transmit_bsc(const BitString& bits, double p,
                       const SeededGenerator& gen);

/// Burst-noise variant: errors arrive as runs of exactly `run_length`
/// consecutive flips (clipped at the end of the string). Run starts are
/// drawn so the marginal flip rate approximates p. Exists to exercise the
/// claim that the first shared permutation makes block errors effectively
/// independent even under correlated noise.
BitString transmit_burst(const BitString& bits, double p,
                         std::size_t run_length, const SeededGenerator& gen);

/// Which transmitted bits the adversary managed to read.
struct EveTap {
  BitString known_mask;  // 1 = position known to the adversary
  double fraction = 0.0; // target density p_e
};

/// Mark each position known independently with probability p_e (0 <= p_e <= 1).
/// The adversary's gains from the classical channel are accounted
/// analytically (EveLedger), not bit-by-bit; the tap models only the
/// quantum-side leak.
EveTap eve_tap(const BitString& bits, double p_e, const SeededGenerator& gen);

/// Outcome of one simulated end-to-end key agreement.
struct TrialReport {
  std::uint64_t seed = 0;
  SessionStatus status = SessionStatus::aborted;
  bool success = false;
  std::vector<RoundRecord> rounds;
  /// True discrepancy (Hamming oracle) in the strings entering each round;
  /// index-aligned with `rounds`.
  std::vector<std::int64_t> oracle_errors;
  std::int64_t final_n = 0;          // agreed bits before amplification
  std::int64_t key_len = 0;          // key bits after amplification
  std::int64_t residual_errors = 0;  // oracle count at the last verification
  std::int64_t delta = 0;
  std::int64_t classical_bits_total = 0;
  int verify_attempts = 0;
  bool keys_identical = false;

  friend bool operator==(const TrialReport&, const TrialReport&) = default;
};

/// Run one full trial: generate Alice's bits, transmit them over the BSC at
/// the session's p0, reconcile with run_session, and measure the true
/// discrepancy with the Hamming oracle at every verification attempt.
/// Deterministic in (config, seed): the seed feeds the source bits, the
/// channel noise, and the session's shared randomness through independent
/// sub-streams.
TrialReport run_trial(const SessionConfig& config, std::uint64_t seed);

/// Aggregate statistics over repeated trials.
struct MonteCarloSummary {
  std::vector<TrialReport> trials;
  double success_rate = 0.0;
  double mean_rounds = 0.0;
  double mean_final_n = 0.0;
  double stddev_final_n = 0.0;  // sample standard deviation (0 if one trial)
  double mean_key_len = 0.0;
};

/// Run `trials` independent trials with seeds base_seed, base_seed+1, ...
/// Deterministic in (config, trials, base_seed); one trial reproduces
/// run_trial(config, base_seed) exactly.
MonteCarloSummary monte_carlo(const SessionConfig& config, int trials,
                              std::uint64_t base_seed);

}  // namespace qkdr
