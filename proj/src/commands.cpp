#include "qkdr/commands.hpp"

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>

#include "qkdr/analysis.hpp"
#include "qkdr/predictor.hpp"

namespace qkdr {

namespace {

std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string fmt_compact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string advantage_cell(const std::optional<double>& advantage) {
  if (!advantage || *advantage < kAdvantageFloor) return kDashCell;
  return fmt_count(*advantage);
}

const char* status_name(SessionStatus status) {
  switch (status) {
    case SessionStatus::success:
      return "success";
    case SessionStatus::failed_too_small:
      return "failed_too_small";
    case SessionStatus::aborted:
      return "aborted";
  }
  return "unknown";
}

OutputTable sweep_table(const SweepResult& sweep, const std::string& col_prefix,
                        const std::string& col_suffix) {
  OutputTable table;
  table.header.push_back("p");
  for (const double c : sweep.column_axis)
    table.header.push_back(col_prefix + fmt_compact(c) + col_suffix);
  for (std::size_t i = 0; i < sweep.p_values.size(); ++i) {
    std::vector<std::string> row;
    row.push_back(fmt_prob(sweep.p_values[i]));
    for (const SweepCell& cell : sweep.cells[i]) row.push_back(advantage_cell(cell));
    table.add_row(std::move(row));
  }
  return table;
}

}  // namespace

OutputTable cmd_predict(double p, std::int64_t n, std::optional<double> pe) {
  if (!(p > 0.0 && p < 0.5))
    throw UsageError("predict: --p must lie in (0, 1/2)");
  if (n < 16) throw UsageError("predict: --n must be >= 16");
  if (pe && !(*pe >= 0.0 && *pe < 1.0))
    throw UsageError("predict: --pe must lie in [0, 1)");

  std::optional<EveParams> eve;
  if (pe) eve = EveParams::from_pe(*pe);
  const PredictionRun run = predict_run(p, n, eve);

  OutputTable table;
  table.header = {"p", "b", "n", "errors", "bad_blocks", "new_n"};
  if (pe) table.header.push_back("advantage");
  for (const PredictionRow& row : run.rows) {
    std::vector<std::string> cells = {fmt_prob(row.p),          fmt_int(row.b),
                                      fmt_int(row.n),           fmt_count(row.errors),
                                      fmt_count(row.bad_blocks), fmt_int(row.new_n)};
    if (pe) cells.push_back(advantage_cell(row.advantage));
    table.add_row(std::move(cells));
  }
  return table;
}

SimulateResult cmd_simulate(const SessionConfig& config, int trials,
                            std::uint64_t base_seed, std::ostream& log) {
  if (trials < 1) throw UsageError("simulate: --trials must be >= 1");

  const MonteCarloSummary summary = monte_carlo(config, trials, base_seed);

  SimulateResult result;
  result.all_success = true;
  for (const TrialReport& t : summary.trials)
    result.all_success = result.all_success && t.success;

  if (trials == 1) {
    // Single trial: emit the session's round chain.
    const TrialReport& t = summary.trials.front();
    result.table.header = {"round", "p", "b", "n", "errors", "bad_blocks",
                           "new_n"};
    for (std::size_t r = 0; r < t.rounds.size(); ++r) {
      const RoundRecord& rec = t.rounds[r];
      result.table.add_row({fmt_int(rec.index), fmt_prob(rec.p_before),
                            fmt_int(rec.b), fmt_int(rec.n_before),
                            fmt_int(t.oracle_errors[r]),
                            fmt_int(rec.bad_blocks), fmt_int(rec.n_after)});
    }
    log << "seed=" << t.seed << " status=" << status_name(t.status)
        << " rounds=" << t.rounds.size() << " final_n=" << t.final_n
        << " key_len=" << t.key_len << " residual_errors=" << t.residual_errors
        << " delta=" << t.delta << " verify_attempts=" << t.verify_attempts
        << " classical_bits=" << t.classical_bits_total << '\n';
    return result;
  }

  result.table.header = {"trial",   "seed",            "rounds", "final_n",
                         "key_len", "residual_errors", "success"};
  for (std::size_t i = 0; i < summary.trials.size(); ++i) {
    const TrialReport& t = summary.trials[i];
    result.table.add_row({fmt_int(static_cast<std::int64_t>(i)),
                          std::to_string(t.seed),
                          fmt_int(static_cast<std::int64_t>(t.rounds.size())),
                          fmt_int(t.final_n), fmt_int(t.key_len),
                          fmt_int(t.residual_errors),
                          fmt_int(t.success ? 1 : 0)});
  }
  result.table.add_row({"mean", "", fmt_prob(summary.mean_rounds),
                        fmt_prob(summary.mean_final_n),
                        fmt_prob(summary.mean_key_len), "",
                        fmt_prob(summary.success_rate)});
  log << "trials=" << trials << " base_seed=" << base_seed
      << " success_rate=" << fmt_compact(summary.success_rate)
      << " mean_rounds=" << fmt_compact(summary.mean_rounds)
      << " mean_final_n=" << fmt_compact(summary.mean_final_n)
      << " stddev_final_n=" << fmt_compact(summary.stddev_final_n)
      << " mean_key_len=" << fmt_compact(summary.mean_key_len) << '\n';
  return result;
}

OutputTable cmd_blocksize(double p) {
  if (!(p > 0.0 && p <= 0.5))
    throw UsageError("blocksize: --p must lie in (0, 1/2]");
  OutputTable table;
  table.header = {"p", "b"};
  table.add_row({fmt_prob(p), fmt_int(optimal_blocksize(p))});
  return table;
}

OutputTable cmd_crossovers(std::int64_t bmax) {
  if (bmax < 2 || bmax > 512)
    throw UsageError("crossovers: --bmax must lie in [2, 512]");
  OutputTable table;
  table.header = {"b", "p"};
  for (std::int64_t b = 2; b <= bmax; ++b)
    table.add_row({fmt_int(b), fmt_fixed(crossover_point(b), 5)});
  return table;
}

OutputTable cmd_sweep_pe(const std::vector<double>& p_values,
                         const std::vector<double>& pe_values, std::int64_t n) {
  if (p_values.empty()) throw UsageError("sweep: --p list must not be empty");
  if (pe_values.empty()) throw UsageError("sweep: --pe list must not be empty");
  if (n < 16) throw UsageError("sweep: --n must be >= 16");
  for (const double p : p_values)
    if (!(p > 0.0 && p < 0.5))
      throw UsageError("sweep: every --p must lie in (0, 1/2)");
  for (const double pe : pe_values)
    if (!(pe >= 0.0 && pe < 1.0))
      throw UsageError("sweep: every --pe must lie in [0, 1)");
  return sweep_table(sweep_pe(p_values, pe_values, n), "pe=", "");
}

OutputTable cmd_sweep_qe_ratio(const std::vector<double>& p_values,
                               const std::vector<double>& ratios,
                               std::int64_t n) {
  if (p_values.empty()) throw UsageError("sweep: --p list must not be empty");
  if (ratios.empty())
    throw UsageError("sweep: --qe-ratio list must not be empty");
  if (n < 16) throw UsageError("sweep: --n must be >= 16");
  for (const double p : p_values)
    if (!(p > 0.0 && p < 0.5))
      throw UsageError("sweep: every --p must lie in (0, 1/2)");
  for (const double ratio : ratios) {
    if (!(ratio > 0.0)) throw UsageError("sweep: every --qe-ratio must be > 0");
    for (const double p : p_values)
      if (ratio * p > 1.0)
        throw UsageError("sweep: --qe-ratio * p must not exceed 1");
  }
  return sweep_table(sweep_qe_ratio(p_values, ratios, n), "qe=", "p");
}

}  // namespace qkdr
