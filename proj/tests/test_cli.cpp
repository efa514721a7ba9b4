#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

std::string g_cli;  // path to the CLI binary, from argv[1]

int run_cli(const std::string& args) {
  std::string cmd = g_cli + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && argv[1][0] != '-') g_cli = argv[1];
  doctest::Context ctx;
  ctx.applyCommandLine(argc > 1 ? argc - 1 : argc, argc > 1 ? argv + 1 : argv);
  return ctx.run();
}

TEST_CASE("validate exits 0 on the shipped examples") {
  REQUIRE(!g_cli.empty());
  CHECK(run_cli("validate --config configs/run_example1.json --out out/cli_v1") == 0);
  CHECK(run_cli("validate --config configs/run_example2.json --out out/cli_v2") == 0);
}

TEST_CASE("input problems exit 2") {
  CHECK(run_cli("validate --config configs/no_such.json") == 2);
  CHECK(run_cli("bogus_stage --config configs/run_example1.json") == 2);
}

TEST_CASE("constraint violations exit 1") {
  CHECK(run_cli("validate --config configs/run_example1.json "
                "--override params.chi=5 --out out/cli_chi") == 1);
}

TEST_CASE("stage order violations exit 3") {
  CHECK(run_cli("flatness --config configs/run_example1.json --out out/cli_order") == 3);
  // roots needs validate first as well.
  CHECK(run_cli("roots --config configs/run_example1.json --out out/cli_order2") == 3);
}

TEST_CASE("stale artifacts from a different config are rejected") {
  CHECK(run_cli("validate --config configs/run_example1.json --out out/cli_stale") == 0);
  // Changing a numerical knob changes the tag, so roots must refuse the old
  // validate artifact.
  CHECK(run_cli("roots --config configs/run_example1.json "
                "--override solver.n_m=33 --out out/cli_stale") == 3);
}

TEST_CASE("eps override reaches the solver stage") {
  CHECK(run_cli("validate --config configs/run_example1.json --out out/cli_eps") == 0);
  CHECK(run_cli("solve_outer --config configs/run_example1.json "
                "--eps 0.05,0.04 --out out/cli_eps") == 0);
  auto doc = nlohmann::json::parse(slurp("out/cli_eps/solve_outer.json"));
  REQUIRE(doc.at("runs").size() == 2);
  double abs0 = std::hypot(doc["runs"][0]["eps"][0].get<double>(),
                           doc["runs"][0]["eps"][1].get<double>());
  CHECK(abs0 == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("validate artifacts are byte-identical across runs") {
  REQUIRE(run_cli("validate --config configs/run_example1.json --out out/cli_d1") == 0);
  REQUIRE(run_cli("validate --config configs/run_example1.json --out out/cli_d2") == 0);
  auto a = slurp("out/cli_d1/validate.json");
  auto b = slurp("out/cli_d2/validate.json");
  REQUIRE(!a.empty());
  CHECK(a == b);
}
