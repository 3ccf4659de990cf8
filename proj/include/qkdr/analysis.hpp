#pragma once

#include <cstdint>

namespace qkdr {

/// Per-bit channel error probability p (0 <= p <= 1/2) with its complement.
struct ChannelParams {
  double p;
  double q;  // 1 - p

  static ChannelParams from_p(double p);
};

/// Eavesdropper knowledge state: fraction p_e of retained bits known to the
/// adversary, its complement q_e, and whether the adversary may hold linear
/// relations between bits (has_relations = true) rather than only individual
/// bit values. has_relations starts false and never reverts within a session.
///
/// q_e is carried as the primary quantity and p_e derived from it; q_e is the
/// operand of the blocksize rule and the advantage estimate, and deriving it
/// as 1 - p_e would lose precision exactly where it matters (q_e near 0).
struct EveParams {
  double p_e;
  double q_e;  // 1 - p_e
  bool has_relations = false;

  static EveParams from_pe(double p_e, bool has_relations = false);
  static EveParams from_qe(double q_e, bool has_relations = false);
};

/// P0: probability that a b-bit block contains no errors, (1-p)^b.
double prob_no_error(double p, std::int64_t b);

/// P1: probability that a block is bad (odd number of errors),
/// (1 - (1-2p)^b) / 2.
double prob_bad_block(double p, std::int64_t b);

/// P2: probability that a block contains undetected errors (a nonzero even
/// number), (1 - 2(1-p)^b + (1-2p)^b) / 2. P0 + P1 + P2 = 1.
double prob_undetected(double p, std::int64_t b);

/// E_u: expected number of errors in a block that passes the parity check,
/// b*p*(1 - (1-2p)^(b-1)) / (1 + (1-2p)^b).
double expected_errors_good_block(double p, std::int64_t b);

/// p-tilde: per-bit error probability among retained bits after a round,
/// p*(1 - (1-2p)^(b-1)) / (1 + (1-2p)^b). Equals E_u / b.
double residual_error_prob(double p, std::int64_t b);

/// Invert the bad-block rate: given the observed fraction E_b of bad blocks,
/// estimate the per-bit error probability. 0 if E_b <= 0; the exact inverse
/// (1 - (1-2*E_b)^(1/b))/2 for 0 < E_b < 1/2; clamped to 1/2 otherwise.
double reestimate_p(double e_b, std::int64_t b);

/// Binary Shannon entropy in bits, -(p*log2(p) + q*log2(q)), with
/// 0*log2(0) = 0.
double shannon_entropy(double p);

/// J(b): expected yield per input bit of a round at blocksize b,
/// (1 - P1) * (1 - 1/b) * (1 - H(p-tilde)). The blocksize criterion is to
/// maximize J.
double yield_criterion(double p, std::int64_t b);

/// No practical blocksize cap: optimal_blocksize's internal scan bound
/// (max(1000, ceil(3/sqrt(p)))) always binds first.
inline constexpr std::int64_t kNoBlocksizeCap = 1'000'000'000;

/// argmax of yield_criterion over 2 <= b <= b_max, ties toward smaller b.
/// The scan is capped internally at max(1000, ceil(3/sqrt(p))), beyond which
/// J is decreasing for any p > 0. For p = 0, J = 1 - 1/b is increasing, so
/// b_max itself is returned.
std::int64_t optimal_blocksize(double p, std::int64_t b_max = kNoBlocksizeCap);

/// Smallest p (to 5 decimals) for which b is the optimal blocksize, found by
/// bisection on the optimal_blocksize boundary and rounded to 5 decimals.
double crossover_point(std::int64_t b);

/// Estimate of the number of rounds needed to reconcile at error rate p with
/// n_f bits remaining and failure tolerance delta:
/// log2(2/(1-2p)) + log_{3/2}(log2(n_f/delta)).
double expected_rounds(double p, double n_f, double delta);

/// Adversary update after a round of blocksize b when only individual bits
/// are known (no relations): p_e' = p_e + (p_e - p_e^b)/(b - 1).
/// Satisfies 1 - p_e' >= (1 - p_e)^2, with equality iff b = 2 or
/// p_e in {0, 1}.
double eve_update_case1(double p_e, std::int64_t b);

/// Adversary update when relations may be held: each disclosed block parity
/// is worth at most one bit, p_e' = min(1, p_e + 1/b).
double eve_update_case2(double p_e, std::int64_t b);

/// Advance EveParams through one round of blocksize b: applies
/// eve_update_case1 or eve_update_case2 according to has_relations, then
/// sets has_relations if b > 2 (a blocksize-2 round discards one bit per
/// good block, which absorbs the disclosed parity; larger blocks leave the
/// adversary with genuine linear relations). The update is computed on q_e
/// to avoid cancellation; it equals the case functions up to rounding.
EveParams eve_after_round(const EveParams& eve, std::int64_t b);

/// Blocksize rule when tracking the adversary: 2 while no relations are held
/// and 4p > q_e, else floor(max(2, 1/sqrt(p*q_e))), clamped to b_max.
/// Degenerate p*q_e = 0 returns b_max.
std::int64_t choose_blocksize_eve(double p, const EveParams& eve,
                                  std::int64_t b_max = kNoBlocksizeCap);

/// Conservative bound on the fraction of bits the adversary may know, given
/// the observed channel error rate: min(1, p*sqrt(8)).
double estimate_pe_from_error_rate(double p);

}  // namespace qkdr
