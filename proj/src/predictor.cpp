#include "qkdr/predictor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qkdr {

namespace {

std::int64_t isqrt_floor(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::int64_t select_blocksize(double p, std::int64_t n,
                              const std::optional<EveParams>& eve,
                              const BlocksizePolicy& policy) {
  if (policy.mode == BlocksizeMode::eve_aware) {
    if (!eve.has_value()) {
      throw std::invalid_argument("eve_aware policy requires adversary parameters");
    }
    return choose_blocksize_eve(p, *eve, /*b_max=*/n);
  }
  return optimal_blocksize(p, isqrt_floor(n));
}

}  // namespace

RoundPrediction predict_round(double p, std::int64_t n,
                              const std::optional<EveParams>& eve,
                              const BlocksizePolicy& policy) {
  if (!(p > 0.0 && p < 0.5)) {
    throw std::invalid_argument("predict_round requires 0 < p < 1/2, got " +
                                std::to_string(p));
  }
  if (n < 4) {
    throw std::invalid_argument("predict_round requires n >= 4, got " +
                                std::to_string(n));
  }

  const std::int64_t b = select_blocksize(p, n, eve, policy);
  const double db = static_cast<double>(b);
  const double dn = static_cast<double>(n);
  const double p1 = prob_bad_block(p, b);

  RoundPrediction out;
  out.row.p = p;
  out.row.b = b;
  out.row.n = n;
  out.row.errors = p * dn;
  out.row.bad_blocks = p1 * (dn / db);
  out.row.new_n =
      static_cast<std::int64_t>(std::floor((1.0 - p1) * (1.0 - 1.0 / db) * dn));
  out.next_p = residual_error_prob(p, b);

  if (eve.has_value()) {
    const EveParams next = eve_after_round(*eve, b);
    out.next_eve = next;
    out.row.advantage =
        static_cast<double>(out.row.new_n) * (next.q_e - out.next_p);
  }
  return out;
}

RoundPrediction predict_round(double p, std::int64_t n,
                              const std::optional<EveParams>& eve) {
  BlocksizePolicy policy;
  policy.mode =
      eve.has_value() ? BlocksizeMode::eve_aware : BlocksizeMode::yield_maximizing;
  return predict_round(p, n, eve, policy);
}

PredictionRun predict_run(double p0, std::int64_t n0,
                          const std::optional<EveParams>& eve0) {
  PredictionRun run;
  double p = p0;
  std::int64_t n = n0;
  std::optional<EveParams> eve = eve0;
  // Stop when fewer than one error is expected to survive.
  while (p * static_cast<double>(n) >= 1.0 && n >= 4) {
    RoundPrediction step = predict_round(p, n, eve);
    run.rows.push_back(step.row);
    p = step.next_p;
    n = step.row.new_n;
    eve = step.next_eve;
    if (p <= 0.0) break;
  }
  run.final_n = n;
  if (!run.rows.empty()) run.final_advantage = run.rows.back().advantage;
  return run;
}

namespace {

SweepResult sweep_impl(const std::vector<double>& p_values,
                       const std::vector<double>& columns, std::int64_t n0,
                       bool columns_are_ratios) {
  SweepResult result;
  result.p_values = p_values;
  result.column_axis = columns;
  result.cells.resize(p_values.size());
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    const double p = p_values[i];
    result.cells[i].reserve(columns.size());
    for (const double col : columns) {
      // Initialize from q_e in both modes: the blocksize rule and the
      // advantage operate on q_e, and q_e = ratio*p must stay exact or the
      // rule's floor flips at exact integer boundaries.
      const EveParams eve = columns_are_ratios ? EveParams::from_qe(col * p)
                                               : EveParams::from_qe(1.0 - col);
      const PredictionRun run = predict_run(p, n0, eve);
      SweepCell cell;
      if (run.final_advantage.has_value() &&
          *run.final_advantage >= kAdvantageFloor) {
        cell = *run.final_advantage;
      }
      result.cells[i].push_back(cell);
    }
  }
  return result;
}

}  // namespace

SweepResult sweep_pe(const std::vector<double>& p_values,
                     const std::vector<double>& pe_values, std::int64_t n0) {
  return sweep_impl(p_values, pe_values, n0, /*columns_are_ratios=*/false);
}

SweepResult sweep_qe_ratio(const std::vector<double>& p_values,
                           const std::vector<double>& ratios, std::int64_t n0) {
  return sweep_impl(p_values, ratios, n0, /*columns_are_ratios=*/true);
}

}  // namespace qkdr
