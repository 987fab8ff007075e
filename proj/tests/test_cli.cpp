#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "dcsym/json_io.hpp"

#ifndef DCSYM_CLI_PATH
#define DCSYM_CLI_PATH "./dcsym"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(DCSYM_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("classify example is byte-stable and correct") {
  auto r1 = run_cli("classify --d \"u^(-2)\" --k \"0\"");
  CHECK(r1.exit_code == 0);
  CHECK(contains(r1.out, "\"case\":\"1.7a\""));
  CHECK(contains(r1.out, "\"mu\":-2"));
  auto r2 = run_cli("classify --d \"u^(-2)\" --k \"0\"");
  CHECK(r1.out == r2.out);
}

TEST_CASE("verify-tables runs all cases and is stable under a fixed seed") {
  auto r1 = run_cli("verify-tables --table 1 --seed 7");
  CHECK(r1.exit_code == 0);
  CHECK(contains(r1.out, "\"table\":1,\"cases\":12,\"pass\":true"));
  auto r2 = run_cli("verify-tables --table 1 --seed 7");
  CHECK(r1.out == r2.out);
  // a different seed still passes (values may differ)
  auto r3 = run_cli("verify-tables --table 1 --seed 8");
  CHECK(r3.exit_code == 0);
}

TEST_CASE("verify-tables table 2 covers 21 cases") {
  auto r = run_cli("verify-tables --table 2 --seed 7");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "\"table\":2,\"cases\":21,\"pass\":true"));
}

TEST_CASE("corrupted catalog fails naming the case") {
  auto j = dcsym::catalog_to_json(dcsym::catalog());
  // sabotage case 1.8's conformal operator
  for (auto& c : j["table1"]) {
    if (c["label"] == "1.8") c["basis"][4]["eta"] = "-3*x*u + u";
  }
  std::string path = "/tmp/dcsym_corrupted_catalog.json";
  std::ofstream(path) << j.dump();
  auto r = run_cli("verify-tables --table 1 --catalog " + path + " --seed 7");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.out, "\"first_failure\":\"1.8 operator 4\""));
}

TEST_CASE("map-solution emits the arrow record") {
  auto r = run_cli("map-solution --list 9 --id 5 --via hodograph");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "\"source\":\"5\""));
  CHECK(contains(r.out, "\"target\":\"4\""));
  CHECK(contains(r.out, "\"eps\":4.0"));
  CHECK(contains(r.out, "\"pass\":true"));
}

TEST_CASE("limits report") {
  auto r1 = run_cli("limits");
  CHECK(r1.exit_code == 0);
  CHECK(contains(r1.out, "\"decreasing\":true,\"pass\":true"));
  auto r2 = run_cli("limits");
  CHECK(r1.out == r2.out);
}

TEST_CASE("dump-catalog round trips") {
  auto r = run_cli("dump-catalog");
  CHECK(r.exit_code == 0);
  auto j = dcsym::Json::parse(r.out);
  auto back = dcsym::catalog_from_json(j);
  CHECK(back.table1.size() == 12);
  CHECK(back.table2.size() == 21);
  CHECK(back.transcription_notes.size() == dcsym::catalog().transcription_notes.size());
  auto r2 = run_cli("dump-catalog");
  CHECK(r.out == r2.out);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("verify-tables").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("classify --d \"u^\" --k \"0\"").exit_code == 2);
  CHECK(run_cli("transform --d \"u\" --K \"0\" --via three").exit_code == 2);
}

TEST_CASE("transform subcommand examples") {
  auto r = run_cli("transform --d \"u^(-2)\" --K \"0\" --via hodograph");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "\"output\":{\"d\":\"1\""));
  auto r2 = run_cli("transform --d \"u^(-2)\" --K \"u\" --via pp --eps 1");
  CHECK(r2.exit_code == 0);
  CHECK(contains(r2.out, "\"output\":{\"d\":\"u^(-2)\""));
}
