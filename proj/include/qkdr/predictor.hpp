#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qkdr/analysis.hpp"

namespace qkdr {

/// Blocksize selection rule for the forecaster.
///
/// yield_maximizing follows the J(b) criterion and respects the protocol's
/// floor(sqrt(n)) cap. eve_aware follows the adversary-tracking rule; its
/// blocksize is deliberately NOT capped at floor(sqrt(n)) (only clamped to n)
/// because the expected-value tables the forecaster reproduces are computed
/// with the uncapped rule — the live protocol always applies the cap.
enum class BlocksizeMode { yield_maximizing, eve_aware };

struct BlocksizePolicy {
  BlocksizeMode mode = BlocksizeMode::yield_maximizing;
};

/// One forecast round: the row type of the prediction tables. errors and
/// bad_blocks are expected values (fractional); n and new_n are carried as
/// whole bits. advantage (present when the adversary is tracked) is the
/// expected count of final bits unknown to the adversary, n'*(1 - p_e' - p~').
struct PredictionRow {
  double p = 0.0;
  std::int64_t b = 0;
  std::int64_t n = 0;
  double errors = 0.0;
  double bad_blocks = 0.0;
  std::int64_t new_n = 0;
  std::optional<double> advantage;
};

/// A full forecast: rounds until fewer than one error is expected to remain.
struct PredictionRun {
  std::vector<PredictionRow> rows;
  std::int64_t final_n = 0;
  std::optional<double> final_advantage;
  [[nodiscard]] int rounds() const noexcept { return static_cast<int>(rows.size()); }
};

/// Result of a single forecast step.
struct RoundPrediction {
  PredictionRow row;
  double next_p = 0.0;
  std::optional<EveParams> next_eve;
};

/// Forecast one round from (p, n): selects b per the policy, fills the
/// expected counts, advances p via the residual error rate and the adversary
/// state via the case update. Requires 0 < p < 1/2 and n >= 4.
///
/// The bit count is carried as floor((1-P1)(1-1/b)*n): whole bits survive a
/// round, and the floor matches the published expected-value chains cell for
/// cell (see README notes on rounding).
RoundPrediction predict_round(double p, std::int64_t n,
                              const std::optional<EveParams>& eve,
                              const BlocksizePolicy& policy);

/// Convenience: policy inferred from the adversary's presence.
RoundPrediction predict_round(double p, std::int64_t n,
                              const std::optional<EveParams>& eve = std::nullopt);

/// Iterate predict_round from (p0, n0) until p*n < 1 (fewer than one error
/// expected) or fewer than 4 bits remain.
PredictionRun predict_run(double p0, std::int64_t n0,
                          const std::optional<EveParams>& eve0 = std::nullopt);

/// Advantage matrix cell: empty means "below the floor of 64 bits" and is
/// rendered as a dash.
using SweepCell = std::optional<double>;

struct SweepResult {
  std::vector<double> p_values;     // row axis
  std::vector<double> column_axis;  // p_e values or q_e/p ratios
  std::vector<std::vector<SweepCell>> cells;  // cells[i][j] for (p_i, col_j)
};

/// Final advantage for each (p, p_e) pair; cells with advantage < 64 are
/// empty (dash).
SweepResult sweep_pe(const std::vector<double>& p_values,
                     const std::vector<double>& pe_values, std::int64_t n0);

/// Final advantage for each (p, ratio) pair with the adversary's unknown
/// fraction initialized to q_e = ratio*p.
SweepResult sweep_qe_ratio(const std::vector<double>& p_values,
                           const std::vector<double>& ratios, std::int64_t n0);

/// Advantage values below this threshold are reported as dashes.
inline constexpr double kAdvantageFloor = 64.0;

}  // namespace qkdr
