#include "qkdr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qkdr {

namespace {

void check_p(double p) {
  if (!(p >= 0.0 && p <= 0.5)) {
    throw std::invalid_argument("error probability must satisfy 0 <= p <= 1/2, got " +
                                std::to_string(p));
  }
}

void check_b(std::int64_t b) {
  if (b < 2) {
    throw std::invalid_argument("blocksize must be >= 2, got " + std::to_string(b));
  }
}

void check_pe(double p_e) {
  if (!(p_e >= 0.0 && p_e <= 1.0)) {
    throw std::invalid_argument("adversary fraction must satisfy 0 <= p_e <= 1, got " +
                                std::to_string(p_e));
  }
}

/// (1-2p)^b for 0 <= p <= 1/2; the base is never negative.
double pow_1m2p(double p, double b) { return std::pow(1.0 - 2.0 * p, b); }

}  // namespace

ChannelParams ChannelParams::from_p(double p) {
  check_p(p);
  return ChannelParams{p, 1.0 - p};
}

EveParams EveParams::from_pe(double p_e, bool has_relations) {
  check_pe(p_e);
  return EveParams{p_e, 1.0 - p_e, has_relations};
}

EveParams EveParams::from_qe(double q_e, bool has_relations) {
  check_pe(q_e);
  return EveParams{1.0 - q_e, q_e, has_relations};
}

double prob_no_error(double p, std::int64_t b) {
  check_p(p);
  check_b(b);
  return std::pow(1.0 - p, static_cast<double>(b));
}

double prob_bad_block(double p, std::int64_t b) {
  check_p(p);
  check_b(b);
  return (1.0 - pow_1m2p(p, static_cast<double>(b))) / 2.0;
}

double prob_undetected(double p, std::int64_t b) {
  check_p(p);
  check_b(b);
  return (1.0 - 2.0 * std::pow(1.0 - p, static_cast<double>(b)) +
          pow_1m2p(p, static_cast<double>(b))) /
         2.0;
}

double expected_errors_good_block(double p, std::int64_t b) {
  check_p(p);
  check_b(b);
  const double db = static_cast<double>(b);
  return db * p * (1.0 - pow_1m2p(p, db - 1.0)) / (1.0 + pow_1m2p(p, db));
}

double residual_error_prob(double p, std::int64_t b) {
  check_p(p);
  check_b(b);
  const double db = static_cast<double>(b);
  return p * (1.0 - pow_1m2p(p, db - 1.0)) / (1.0 + pow_1m2p(p, db));
}

double reestimate_p(double e_b, std::int64_t b) {
  if (!(e_b >= 0.0 && e_b <= 1.0)) {
    throw std::invalid_argument("block error rate must satisfy 0 <= E_b <= 1");
  }
  check_b(b);
  if (e_b <= 0.0) return 0.0;
  if (e_b >= 0.5) return 0.5;
  return (1.0 - std::pow(1.0 - 2.0 * e_b, 1.0 / static_cast<double>(b))) / 2.0;
}

double shannon_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("entropy argument must satisfy 0 <= p <= 1");
  }
  if (p <= 0.0 || p >= 1.0) return 0.0;
  const double q = 1.0 - p;
  return -(p * std::log2(p) + q * std::log2(q));
}

double yield_criterion(double p, std::int64_t b) {
  check_p(p);
  check_b(b);
  const double db = static_cast<double>(b);
  return (1.0 - prob_bad_block(p, b)) * (1.0 - 1.0 / db) *
         (1.0 - shannon_entropy(residual_error_prob(p, b)));
}

std::int64_t optimal_blocksize(double p, std::int64_t b_max) {
  check_p(p);
  check_b(b_max);
  if (p <= 0.0) return b_max;  // J = 1 - 1/b: larger is always better
  // Beyond ~3/sqrt(p) blocks are so long that nearly every block is bad and
  // J decays; 1000 is a safety floor so the scan is exhaustive in practice.
  const auto scan_cap = static_cast<std::int64_t>(
      std::max(1000.0, std::ceil(3.0 / std::sqrt(p))));
  const std::int64_t hi = std::min(b_max, scan_cap);
  std::int64_t best_b = 2;
  double best_j = -1.0;
  for (std::int64_t b = 2; b <= hi; ++b) {
    const double j = yield_criterion(p, b);
    if (j > best_j) {
      best_j = j;
      best_b = b;
    }
  }
  return best_b;
}

double crossover_point(std::int64_t b) {
  check_b(b);
  // optimal_blocksize is a non-increasing step function of p; bisect for the
  // boundary where it first drops to <= b, i.e. the smallest p with b optimal.
  double lo = 1e-6;
  double hi = 0.499999;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (optimal_blocksize(mid) <= b) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::round(hi * 1e5) / 1e5;
}

double expected_rounds(double p, double n_f, double delta) {
  if (!(p > 0.0 && p < 0.5)) {
    throw std::domain_error("expected_rounds requires 0 < p < 1/2 (diverges at 1/2)");
  }
  if (!(n_f >= 1.0)) throw std::invalid_argument("expected_rounds requires n_f >= 1");
  if (!(delta > 0.0 && delta <= n_f)) {
    throw std::invalid_argument("expected_rounds requires 0 < delta <= n_f");
  }
  return std::log2(2.0 / (1.0 - 2.0 * p)) +
         std::log(std::log2(n_f / delta)) / std::log(1.5);
}

double eve_update_case1(double p_e, std::int64_t b) {
  check_pe(p_e);
  check_b(b);
  return p_e + (p_e - std::pow(p_e, static_cast<double>(b))) /
                   static_cast<double>(b - 1);
}

double eve_update_case2(double p_e, std::int64_t b) {
  check_pe(p_e);
  check_b(b);
  return std::min(1.0, p_e + 1.0 / static_cast<double>(b));
}

EveParams eve_after_round(const EveParams& eve, std::int64_t b) {
  check_b(b);
  double q_e;
  if (eve.has_relations) {
    q_e = std::max(0.0, eve.q_e - 1.0 / static_cast<double>(b));
  } else {
    q_e = eve.q_e - (eve.p_e - std::pow(eve.p_e, static_cast<double>(b))) /
                        static_cast<double>(b - 1);
  }
  q_e = std::clamp(q_e, 0.0, 1.0);
  return EveParams{1.0 - q_e, q_e, eve.has_relations || b > 2};
}

std::int64_t choose_blocksize_eve(double p, const EveParams& eve,
                                  std::int64_t b_max) {
  check_p(p);
  check_b(b_max);
  if (!eve.has_relations && 4.0 * p > eve.q_e) return 2;
  const double product = p * eve.q_e;
  if (product <= 0.0) return b_max;  // rule diverges; take the largest allowed
  const auto b = static_cast<std::int64_t>(
      std::floor(std::max(2.0, 1.0 / std::sqrt(product))));
  return std::clamp<std::int64_t>(b, 2, b_max);
}

double estimate_pe_from_error_rate(double p) {
  check_p(p);
  return std::min(1.0, p * std::sqrt(8.0));
}

}  // namespace qkdr
