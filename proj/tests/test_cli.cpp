#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "qkdr/table.hpp"

// QKDR_CLI_BIN is injected by the build: the absolute path of the CLI binary.

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run_shell(const std::string& command) {
  CliResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe) != nullptr) result.out += buf;
  const int status = pclose(pipe);
  if (WIFEXITED(status)) result.code = WEXITSTATUS(status);
  return result;
}

/// Run the CLI and capture stdout; stderr is dropped.
CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  return run_shell(env_prefix + std::string(QKDR_CLI_BIN) + " " + args +
                   " 2>/dev/null");
}

/// Run the CLI and capture stderr instead of stdout.
CliResult run_cli_stderr(const std::string& args) {
  return run_shell(std::string(QKDR_CLI_BIN) + " " + args +
                   " 2>&1 1>/dev/null");
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  for (const char c : text) {
    if (c == '\n') {
      out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

TEST_CASE("blocksize: known optima as exact CSV") {
  const CliResult tiny = run_cli("blocksize --p 0.001");
  CHECK(tiny.code == 0);
  CHECK(tiny.out == "p,b\n0.001000,32\n");

  const CliResult max_noise = run_cli("blocksize --p 0.5");
  CHECK(max_noise.code == 0);
  CHECK(max_noise.out == "p,b\n0.500000,2\n");
}

TEST_CASE("blocksize: markdown rendering") {
  const CliResult result = run_cli("blocksize --p 0.001 --format md");
  CHECK(result.code == 0);
  CHECK(result.out == "| p | b |\n|---|---|\n| 0.001000 | 32 |\n");
}

TEST_CASE("crossovers: boundary table up to b = 10") {
  const CliResult result = run_cli("crossovers --bmax 10");
  CHECK(result.code == 0);
  CHECK(result.out ==
        "b,p\n"
        "2,0.15973\n"
        "3,0.08682\n"
        "4,0.05400\n"
        "5,0.03657\n"
        "6,0.02629\n"
        "7,0.01974\n"
        "8,0.01534\n"
        "9,0.01225\n"
        "10,0.00999\n");
}

TEST_CASE("predict: round chain from p = 1/4 as exact CSV") {
  const CliResult result = run_cli("predict --p 0.25");
  CHECK(result.code == 0);
  CHECK(result.out ==
        "p,b,n,errors,bad_blocks,new_n\n"
        "0.250000,2,1000000,250000,187500,312500\n"
        "0.100000,3,312500,31250,25416,157500\n"
        "0.023810,7,157500,3749,3254,115470\n"
        "0.003532,17,115470,407,385,102507\n"
        "0.000201,71,102507,20,20,99642\n");
}

TEST_CASE("predict: adversary-tracked chain carries the advantage column") {
  const CliResult result = run_cli("predict --p 0.15 --pe 0.25");
  CHECK(result.code == 0);
  CHECK(result.out ==
        "p,b,n,errors,bad_blocks,new_n,advantage\n"
        "0.150000,2,1000000,150000,127500,372500,198281\n"
        "0.030201,7,372500,11250,9404,262857,127321\n"
        "0.005721,18,262857,1503,1366,225030,97658\n"
        "0.000561,64,225030,126,121,213838,89575\n"
        "0.000020,347,213838,4,4,211765,88101\n");
}

TEST_CASE("sweep: single cells, labels, and the dash floor") {
  const CliResult ratio = run_cli("sweep --p 0.01 --qe-ratio 4");
  CHECK(ratio.code == 0);
  CHECK(ratio.out == "p,qe=4p\n0.010000,784\n");

  const CliResult dash = run_cli("sweep --p 0.4 --pe 0.3");
  CHECK(dash.code == 0);
  CHECK(dash.out == "p,pe=0.3\n0.400000," + qkdr::kDashCell + "\n");
}

TEST_CASE("sweep: multi-axis matrix") {
  const CliResult result = run_cli("sweep --p 0.1 0.2 --pe 0 0.1");
  CHECK(result.code == 0);
  CHECK(result.out ==
        "p,pe=0,pe=0.1\n"
        "0.100000,247372,203492\n"
        "0.200000,130015,93047\n");
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(run_cli("predict --p 0.6").code == 2);       // p out of range
  CHECK(run_cli("blocksize --p 0").code == 2);       // p must be positive
  CHECK(run_cli("crossovers --bmax 600").code == 2); // bmax cap
  CHECK(run_cli("sweep --p 0.1").code == 2);         // no column axis
  CHECK(run_cli("sweep --p 0.1 --pe 0.1 --qe-ratio 2").code == 2);  // both axes
  CHECK(run_cli("sweep --p 0.4 --qe-ratio 5").code == 2);  // q_e would exceed 1
  CHECK(run_cli("predict").code == 2);               // missing required --p
  CHECK(run_cli("frobnicate").code == 2);            // unknown subcommand
  CHECK(run_cli("predict --p 0.1 --bogus 1").code == 2);  // unknown flag
  CHECK(run_cli("").code == 2);                      // no subcommand
}

TEST_CASE("help exits successfully") {
  const CliResult result = run_cli("--help");
  CHECK(result.code == 0);
  CHECK(result.out.find("predict") != std::string::npos);
  CHECK(result.out.find("simulate") != std::string::npos);
}

TEST_CASE("simulate: clean channel emits an empty round table and a log line") {
  const CliResult table = run_cli("simulate --p 0 --n 1000 --seed 7");
  CHECK(table.code == 0);
  CHECK(table.out == "round,p,b,n,errors,bad_blocks,new_n\n");

  const CliResult log = run_cli_stderr("simulate --p 0 --n 1000 --seed 7");
  CHECK(log.code == 0);
  CHECK(log.out ==
        "seed=7 status=success rounds=0 final_n=1000 key_len=936 "
        "residual_errors=0 delta=64 verify_attempts=1 classical_bits=64\n");
}

TEST_CASE("simulate: byte-identical output for a fixed seed") {
  const std::string args = "simulate --p 0.25 --n 50000 --seed 3";
  const CliResult first = run_cli(args);
  const CliResult second = run_cli(args);
  CHECK(first.code == 0);
  CHECK(first.out == second.out);
  CHECK_FALSE(first.out.empty());

  // The seed can come from the environment instead of the flag.
  const CliResult from_env =
      run_cli("simulate --p 0.25 --n 50000", "QKDR_SEED=3 ");
  CHECK(from_env.code == 0);
  CHECK(from_env.out == first.out);

  // An explicit --seed wins and the environment is not even parsed.
  const CliResult flag_wins =
      run_cli("simulate --p 0.25 --n 50000 --seed 3", "QKDR_SEED=junk ");
  CHECK(flag_wins.code == 0);
  CHECK(flag_wins.out == first.out);

  // Without --seed a malformed environment value is a usage error.
  CHECK(run_cli("simulate --p 0 --n 1000", "QKDR_SEED=junk ").code == 2);
}

TEST_CASE("simulate: multi-trial table with a mean summary row") {
  const CliResult result =
      run_cli("simulate --p 0.25 --n 20000 --trials 3 --seed 100");
  INFO(result.out);
  CHECK(result.code == 0);

  const std::vector<std::string> rows = lines(result.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "trial,seed,rounds,final_n,key_len,residual_errors,success");
  CHECK(starts_with(rows[1], "0,100,"));
  CHECK(starts_with(rows[2], "1,101,"));
  CHECK(starts_with(rows[3], "2,102,"));
  for (int i = 1; i <= 3; ++i) CHECK(ends_with(rows[static_cast<std::size_t>(i)], ",0,1"));
  CHECK(starts_with(rows[4], "mean,,"));
  CHECK(ends_with(rows[4], ",,1.000000"));
}

TEST_CASE("simulate: a failed trial exits with status 1") {
  // 150 bits cannot yield the default 128-bit minimum key after the 64-bit
  // verification cost, so the session aborts.
  const CliResult result = run_cli("simulate --p 0 --n 150 --seed 1");
  CHECK(result.code == 1);
  CHECK(result.out == "round,p,b,n,errors,bad_blocks,new_n\n");

  const CliResult log = run_cli_stderr("simulate --p 0 --n 150 --seed 1");
  CHECK(log.out.find("status=aborted") != std::string::npos);
  CHECK(log.out.find("error: at least one trial did not succeed") !=
        std::string::npos);
}

TEST_CASE("CSV output round-trips through the parser") {
  for (const std::string& args :
       {std::string("crossovers --bmax 10"), std::string("predict --p 0.25"),
        std::string("sweep --p 0.1 0.2 --pe 0 0.1"),
        std::string("sweep --p 0.4 --pe 0.3")}) {
    CAPTURE(args);
    const CliResult result = run_cli(args);
    REQUIRE(result.code == 0);

    const qkdr::OutputTable table = qkdr::parse_csv(result.out);
    std::ostringstream rendered;
    qkdr::render_csv(table, rendered);
    CHECK(rendered.str() == result.out);
  }

  // Spot-check parsed cells.
  const qkdr::OutputTable predict =
      qkdr::parse_csv(run_cli("predict --p 0.25").out);
  REQUIRE(predict.rows.size() == 5);
  CHECK(predict.header.front() == "p");
  CHECK(predict.rows[2][3] == "3749");
  CHECK(predict.rows[4][5] == "99642");
}
