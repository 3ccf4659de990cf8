#include "qkdr/simchannel.hpp"

#include <cmath>
#include <stdexcept>

namespace qkdr {

namespace {

void check_flip_prob(double p) {
  if (!(p >= 0.0 && p <= 0.5))
    throw std::invalid_argument("channel: p must lie in [0, 1/2]");
}

}  // namespace

BitString transmit_bsc(const BitString& bits, double p,
                       const SeededGenerator& gen) {
  check_flip_prob(p);
  RandomStream rng = gen.make_stream();
  BitString out = bits;
  for (std::size_t i = 0; i < out.length(); ++i) {
    if (rng.next_bool(p)) out.flip(i);
  }
  return out;
}

BitString transmit_burst(const BitString& bits, double p,
                         std::size_t run_length, const SeededGenerator& gen) {
  check_flip_prob(p);
  if (run_length < 1)
    throw std::invalid_argument("channel: run_length must be >= 1");
  // A run of run_length flips starts at any position (outside a run) with
  // probability p / run_length, giving a marginal flip rate close to p for
  // small p.
  const double start_prob = p / static_cast<double>(run_length);
  RandomStream rng = gen.make_stream();
  BitString out = bits;
  std::size_t i = 0;
  while (i < out.length()) {
    if (rng.next_bool(start_prob)) {
      const std::size_t end = std::min(out.length(), i + run_length);
      for (; i < end; ++i) out.flip(i);
    } else {
      ++i;
    }
  }
  return out;
}

EveTap eve_tap(const BitString& bits, double p_e, const SeededGenerator& gen) {
  if (!(p_e >= 0.0 && p_e <= 1.0))
    throw std::invalid_argument("eve_tap: p_e must lie in [0, 1]");
  RandomStream rng = gen.make_stream();
  EveTap tap;
  tap.fraction = p_e;
  tap.known_mask = BitString(bits.length());
  for (std::size_t i = 0; i < bits.length(); ++i) {
    if (rng.next_bool(p_e)) tap.known_mask.set(i, true);
  }
  return tap;
}

TrialReport run_trial(const SessionConfig& config, std::uint64_t seed) {
  SessionConfig cfg = config;
  cfg.shared_seed = seed;

  const SeededGenerator root(seed);
  const BitString alice = generate_random_bits(
      root.child(stream_label::source_bits), static_cast<std::size_t>(cfg.n0));
  const BitString bob =
      transmit_bsc(alice, cfg.p0, root.child(stream_label::channel_noise));

  TrialReport report;
  report.seed = seed;

  SessionHooks hooks;
  auto errors_entering_round =
      static_cast<std::int64_t>(hamming_distance(alice, bob));
  hooks.after_round = [&report, &errors_entering_round](
                          const RoundRecord& /*record*/, const BitString& a,
                          const BitString& b) {
    report.oracle_errors.push_back(errors_entering_round);
    errors_entering_round = static_cast<std::int64_t>(hamming_distance(a, b));
  };
  hooks.after_verify = [&report](int /*attempt*/, bool /*matched*/,
                                 const BitString& a, const BitString& b) {
    report.residual_errors =
        static_cast<std::int64_t>(hamming_distance(a, b));
  };

  const SessionOutcome outcome = run_session(alice, bob, cfg, hooks);
  report.status = outcome.status;
  report.success = outcome.status == SessionStatus::success;
  report.rounds = outcome.rounds;
  report.final_n = outcome.n_agreed;
  report.key_len = static_cast<std::int64_t>(outcome.key.length());
  report.delta = outcome.delta;
  report.classical_bits_total = outcome.classical_bits_total;
  report.verify_attempts = outcome.verify_attempts;
  report.keys_identical = outcome.keys_identical;
  return report;
}

MonteCarloSummary monte_carlo(const SessionConfig& config, int trials,
                              std::uint64_t base_seed) {
  if (trials < 1) throw std::invalid_argument("monte_carlo: trials must be >= 1");

  MonteCarloSummary summary;
  summary.trials.reserve(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i)
    summary.trials.push_back(
        run_trial(config, base_seed + static_cast<std::uint64_t>(i)));

  const auto count = static_cast<double>(trials);
  double successes = 0.0;
  double sum_rounds = 0.0;
  double sum_final = 0.0;
  double sum_key = 0.0;
  for (const TrialReport& t : summary.trials) {
    successes += t.success ? 1.0 : 0.0;
    sum_rounds += static_cast<double>(t.rounds.size());
    sum_final += static_cast<double>(t.final_n);
    sum_key += static_cast<double>(t.key_len);
  }
  summary.success_rate = successes / count;
  summary.mean_rounds = sum_rounds / count;
  summary.mean_final_n = sum_final / count;
  summary.mean_key_len = sum_key / count;

  double ss = 0.0;
  for (const TrialReport& t : summary.trials) {
    const double d = static_cast<double>(t.final_n) - summary.mean_final_n;
    ss += d * d;
  }
  summary.stddev_final_n = trials > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
  return summary;
}

}  // namespace qkdr
