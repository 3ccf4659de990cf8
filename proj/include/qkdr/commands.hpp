#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qkdr/simchannel.hpp"
#include "qkdr/table.hpp"

namespace qkdr {

/// Invalid flag combination or out-of-range argument; the CLI maps this to
/// exit code 2. Derives from std::invalid_argument so library-level argument
/// errors and flag errors share one handling path.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Forecast table: columns p, b, n, errors, bad_blocks, new_n and, when an
/// adversary fraction is given, advantage (dash below the reporting floor).
/// Requires 0 < p < 1/2, n >= 16, pe in [0, 1).
OutputTable cmd_predict(double p, std::int64_t n, std::optional<double> pe);

struct SimulateResult {
  OutputTable table;
  bool all_success = false;
};

/// Run trials and tabulate them. One trial yields the per-round chain
/// (round, p, b, n, errors, bad_blocks, new_n) of that session; several
/// trials yield one row per trial plus a trailing mean row. Summary
/// diagnostics are written to `log`.
SimulateResult cmd_simulate(const SessionConfig& config, int trials,
                            std::uint64_t base_seed, std::ostream& log);

/// Single-row table mapping p to its yield-optimal blocksize.
/// Requires 0 < p <= 1/2.
OutputTable cmd_blocksize(double p);

/// Crossover table: for each b in 2..bmax, the smallest p (5 decimals) at
/// which b is optimal. Requires 2 <= bmax <= 512.
OutputTable cmd_crossovers(std::int64_t bmax);

/// Advantage matrix over p (rows) and fixed adversary fractions pe (columns).
OutputTable cmd_sweep_pe(const std::vector<double>& p_values,
                         const std::vector<double>& pe_values, std::int64_t n);

/// Advantage matrix over p (rows) and unknown-fraction ratios (columns),
/// q_e = ratio * p.
OutputTable cmd_sweep_qe_ratio(const std::vector<double>& p_values,
                               const std::vector<double>& ratios,
                               std::int64_t n);

}  // namespace qkdr
