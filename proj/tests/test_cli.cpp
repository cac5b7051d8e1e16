// End-to-end checks of the command-line surface.  The binary path comes from
// the SSC_CLI_BIN environment variable (wired up by ctest); the suite is
// skipped when it is absent.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "ssc/grid.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const char* bin = std::getenv("SSC_CLI_BIN");
  REQUIRE(bin != nullptr);
  const std::string cmd = std::string(bin) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof(buf), pipe)) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

bool cli_available() { return std::getenv("SSC_CLI_BIN") != nullptr; }

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("generate: unsolvable three-position mask exits zero") {
  if (!cli_available()) return;
  const std::string mask = write_temp("ssc-cli-mask3.txt", "1110000000000000\n");
  const RunResult r = run("generate " + mask + " -n 2 --kmin 10");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("result: UNSOLVABLE") != std::string::npos);
}

TEST_CASE("check: complete grid solves in zero steps") {
  if (!cli_available()) return;
  const std::string grid = write_temp("ssc-cli-complete.txt", "1234341221434321\n");
  const RunResult r = run("check " + grid + " -n 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("result: SOLVED") != std::string::npos);
  CHECK(r.output.find("steps: 0") != std::string::npos);
}

TEST_CASE("trace: deduction log lines appear") {
  if (!cli_available()) return;
  const std::string grid = write_temp(
      "ssc-cli-trace.txt",
      "123456780"
      "000000000000000000000000000000000000000000000000000000000000000000000000\n");
  const RunResult r = run("trace " + grid + " -s ns");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("step 1") != std::string::npos);
  CHECK(r.output.find("1 0 8 9 naked_single") != std::string::npos);
}

TEST_CASE("encode: header matches the variable-map arithmetic") {
  if (!cli_available()) return;
  const std::string mask =
      write_temp("ssc-cli-mask17.txt",
                 "090600000.000080300.000000010.060000800.000205000."
                 "000041000.000300702.401000000.500000000\n");
  const auto cnf = std::filesystem::temp_directory_path() / "ssc-cli-out.cnf";
  const auto map = std::filesystem::temp_directory_path() / "ssc-cli-out.map";
  const RunResult r = run("encode " + mask + " -K 30 --cnf " + cnf.string() +
                          " --map " + map.string());
  CHECK(r.exit_code == 0);
  std::ifstream in(cnf);
  std::string p, kind;
  long vars = 0, clauses = 0;
  in >> p >> kind >> vars >> clauses;
  CHECK(p == "p");
  // reported counts match the file header
  CHECK(r.output.find("vars: " + std::to_string(vars)) != std::string::npos);
  CHECK(r.output.find("clauses: " + std::to_string(clauses)) != std::string::npos);
  // reserved ids from the reduced variable scheme are a lower bound
  const long reserved = 81 * 10 + 64 * 10 * 30 + 81 * 9 + 64 * 9 * 30;
  CHECK(vars > reserved);
  // sidecar mentions the last step
  std::ifstream ms(map);
  std::string map_text((std::istreambuf_iterator<char>(ms)), {});
  CHECK(map_text.find(" 30 ") != std::string::npos);
  std::filesystem::remove(cnf);
  std::filesystem::remove(map);
}

TEST_CASE("oracle subcommand agrees with generate on a 4x4 mask") {
  if (!cli_available()) return;
  const std::string mask = write_temp("ssc-cli-mask4.txt", "1100001100000011\n");
  const RunResult gen = run("generate " + mask + " -n 2 --kmin 10");
  const RunResult orc = run("oracle " + mask + " -n 2");
  CHECK(gen.exit_code == 0);
  CHECK(orc.exit_code == 0);
  const bool gen_clues = gen.output.find("result: CLUES") != std::string::npos;
  const bool orc_clues = orc.output.find("result: CLUES") != std::string::npos;
  CHECK(gen_clues == orc_clues);
}

TEST_CASE("classify: stats lines") {
  if (!cli_available()) return;
  const std::string file = write_temp("ssc-cli-collection.txt",
                                      "1234341221434321\n"
                                      "0000000000000000\n");
  const RunResult r = run("classify " + file + " -n 2 -j 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("total: 2") != std::string::npos);
  CHECK(r.output.find("solvable: 1") != std::string::npos);
}

TEST_CASE("bench: one row per mask") {
  if (!cli_available()) return;
  const std::string file = write_temp("ssc-cli-bench-masks.txt",
                                      "1110000000000000\n"
                                      "1111111111111111\n");
  const RunResult r = run("bench --masks " + file + " -n 2 --kmin 5 -j 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("0 3 UNSOLVABLE") != std::string::npos);
  CHECK(r.output.find("1 16 CLUES") != std::string::npos);
}

TEST_CASE("unknown verdicts use a distinct exit code") {
  if (!cli_available()) return;
  const std::string mask =
      write_temp("ssc-cli-mask17b.txt",
                 "090600000.000080300.000000010.060000800.000205000."
                 "000041000.000300702.401000000.500000000\n");
  const RunResult r = run("generate " + mask + " -s ns --global-budget 1");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("result: UNKNOWN") != std::string::npos);
}

TEST_CASE("usage errors exit with two") {
  if (!cli_available()) return;
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("generate").exit_code == 2);
  const std::string bad = write_temp("ssc-cli-bad.txt", "12\n");
  CHECK(run("check " + bad).exit_code == 2);
}

TEST_CASE("io errors exit with four") {
  if (!cli_available()) return;
  CHECK(run("check /definitely/missing/file.txt").exit_code == 4);
}

TEST_SUITE_END();
