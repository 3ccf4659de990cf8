#include <cerrno>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qkdr/commands.hpp"
#include "qkdr/table.hpp"

namespace {

qkdr::TableFormat parse_format(const std::string& name) {
  return name == "md" ? qkdr::TableFormat::markdown : qkdr::TableFormat::csv;
}

std::uint64_t seed_from_env_or(std::uint64_t fallback) {
  const char* env = std::getenv("QKDR_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  errno = 0;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (errno != 0 || end == env || *end != '\0')
    throw qkdr::UsageError("QKDR_SEED must be an unsigned integer");
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parity-block error reconciliation: prediction, simulation, "
               "and blocksize tables"};
  app.require_subcommand(1);

  double p = 0.0;
  std::int64_t n = 1'000'000;
  double pe = 0.0;
  std::uint64_t seed = 1;
  int trials = 1;
  std::int64_t bmax = 10;
  std::string format = "csv";
  bool cache_friendly = false;
  std::size_t window = std::size_t{1} << 16;
  std::vector<double> p_list;
  std::vector<double> pe_list;
  std::vector<double> ratio_list;

  const auto add_format = [&format](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "md"}));
  };

  CLI::App* predict =
      app.add_subcommand("predict", "Forecast the reconciliation round chain");
  predict->add_option("--p", p, "Channel error probability")->required();
  predict->add_option("--n", n, "Initial bit count");
  predict->add_option("--pe", pe, "Initial adversary fraction");
  add_format(predict);

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run full two-party sessions over a BSC");
  simulate->add_option("--p", p, "Channel error probability")->required();
  simulate->add_option("--n", n, "Initial bit count");
  simulate->add_option("--pe", pe, "Initial adversary fraction");
  simulate->add_option("--seed", seed, "Base seed (default: QKDR_SEED or 1)");
  simulate->add_option("--trials", trials, "Number of independent trials");
  simulate->add_flag("--cache-friendly", cache_friendly,
                     "Use locality-bounded permutations");
  simulate->add_option("--window", window,
                       "Displacement bound for --cache-friendly");
  add_format(simulate);

  CLI::App* blocksize =
      app.add_subcommand("blocksize", "Yield-optimal blocksize for a given p");
  blocksize->add_option("--p", p, "Channel error probability")->required();
  add_format(blocksize);

  CLI::App* crossovers = app.add_subcommand(
      "crossovers", "Smallest p at which each blocksize becomes optimal");
  crossovers->add_option("--bmax", bmax, "Largest blocksize to tabulate");
  add_format(crossovers);

  CLI::App* sweep =
      app.add_subcommand("sweep", "Advantage matrix over p and adversary axes");
  sweep->add_option("--p", p_list, "Channel error probabilities (row axis)");
  sweep->add_option("--pe", pe_list, "Adversary fractions (column axis)");
  sweep->add_option("--qe-ratio", ratio_list,
                    "Unknown-fraction ratios, q_e = ratio*p (column axis)");
  sweep->add_option("--n", n, "Initial bit count");
  add_format(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(predict)) {
      std::optional<double> pe_opt;
      if (predict->count("--pe") > 0) pe_opt = pe;
      qkdr::render(qkdr::cmd_predict(p, n, pe_opt), parse_format(format),
                   std::cout);
      return 0;
    }
    if (app.got_subcommand(simulate)) {
      qkdr::SessionConfig config;
      config.n0 = n;
      config.p0 = p;
      config.pe0 = pe;
      config.cache_friendly = cache_friendly;
      config.window = window;
      if (simulate->count("--seed") == 0) seed = seed_from_env_or(1);
      const qkdr::SimulateResult result =
          qkdr::cmd_simulate(config, trials, seed, std::cerr);
      qkdr::render(result.table, parse_format(format), std::cout);
      if (!result.all_success) {
        std::cerr << "error: at least one trial did not succeed\n";
        return 1;
      }
      return 0;
    }
    if (app.got_subcommand(blocksize)) {
      qkdr::render(qkdr::cmd_blocksize(p), parse_format(format), std::cout);
      return 0;
    }
    if (app.got_subcommand(crossovers)) {
      qkdr::render(qkdr::cmd_crossovers(bmax), parse_format(format), std::cout);
      return 0;
    }
    if (app.got_subcommand(sweep)) {
      if (pe_list.empty() == ratio_list.empty())
        throw qkdr::UsageError(
            "sweep: give exactly one of --pe and --qe-ratio");
      const qkdr::OutputTable table =
          pe_list.empty() ? qkdr::cmd_sweep_qe_ratio(p_list, ratio_list, n)
                          : qkdr::cmd_sweep_pe(p_list, pe_list, n);
      qkdr::render(table, parse_format(format), std::cout);
      return 0;
    }
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
