// End-to-end checks of the installed CLI binary: artifacts, exit codes,
// reduction summary. The binary path arrives via a compile definition.
#include "test_support.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace testsupport;

namespace {

int run_cli(const std::string& args, bool raw = false) {
  std::string cmd = raw ? args + " > /dev/null 2>&1"
                        : std::string(CHAINTRAIL_BIN) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("detect writes the three artifacts and finds the fixture cycles") {
  auto out = fresh_temp_dir("cli_detect");
  std::string edges = (fixtures_dir() / "table1_edges.csv").string();
  std::string tags = (fixtures_dir() / "table1_tags.csv").string();
  int code = run_cli("detect --edges-csv " + edges + " --tags " + tags + " --out " +
                     out.string() + " --emit dot");
  REQUIRE(code == 0);
  CHECK(std::filesystem::exists(out / "cycles.csv"));
  CHECK(std::filesystem::exists(out / "report.json"));
  CHECK(std::filesystem::exists(out / "manifest.json"));
  CHECK(std::filesystem::exists(out / "cycle_0.dot"));
  CHECK(std::filesystem::exists(out / "cycles_combined.dot"));

  std::string csv = slurp(out / "cycles.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  auto report = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(report["cycleCount"] == 3);
  CHECK(report["cyclesWithinAlphaLoss"] == 1);
  CHECK(report["maxHopLength"] == 3);

  auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["counts"]["parsed"] == 10);
  CHECK(manifest["counts"]["nodes"] == 5);
  CHECK(manifest["counts"]["cyclesCanonical"] == 3);
  CHECK(manifest["counts"]["rawCapable"] == true);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("detect --start-labels Phishing") == 2);  // labels without tags (and no inputs)
  std::string edges = (fixtures_dir() / "table1_edges.csv").string();
  CHECK(run_cli("detect --edges-csv " + edges + " --start-labels Phishing") == 2);
  CHECK(run_cli("") == 2);             // missing subcommand
  CHECK(run_cli("detect --bogus x") == 2);
}

TEST_CASE("parse failures exit 3") {
  auto dir = fresh_temp_dir("cli_bad");
  std::ofstream(dir / "bad.csv") << "not,a,valid,header\n";
  std::ofstream(dir / "tags.csv") << "address,label\n";
  CHECK(run_cli("detect --edges-csv " + (dir / "bad.csv").string() + " --tags " +
                (dir / "tags.csv").string()) == 3);

  // valid inputs but an empty starting set is a usage problem
  std::string edges = (fixtures_dir() / "table1_edges.csv").string();
  CHECK(run_cli("detect --edges-csv " + edges + " --tags " + (dir / "tags.csv").string()) == 2);
}

TEST_CASE("detect scales through the pipeline writers") {
  auto dir = fresh_temp_dir("cli_scale");
  REQUIRE(run_cli("gen-fixture --nodes 1201 --edges 2600 --planted-cycles 200 --seed 11 --out " +
                  dir.string()) == 0);
  auto out = dir / "run";
  REQUIRE(run_cli("detect --edges-csv " + (dir / "edges.csv").string() + " --tags " +
                  (dir / "tags.csv").string() + " --out " + out.string()) == 0);
  auto report = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(report["cycleCount"] == 200);
  std::string csv = slurp(out / "cycles.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 201);
}

TEST_CASE("oracle emits the reduction summary and respects its budget") {
  auto out = fresh_temp_dir("cli_oracle");
  std::string edges = (fixtures_dir() / "table1_edges.csv").string();
  std::string tags = (fixtures_dir() / "table1_tags.csv").string();
  int code =
      run_cli("oracle --edges-csv " + edges + " --tags " + tags + " --out " + out.string());
  REQUIRE(code == 0);
  auto reduction = nlohmann::json::parse(slurp(out / "reduction.json"));
  CHECK(reduction["rawCycles"] == 6);
  CHECK(reduction["canonicalCycles"] == 3);
  std::string raw = slurp(out / "raw_cycles.csv");
  CHECK(std::count(raw.begin(), raw.end(), '\n') == 7);  // header + 6 cycles

  CHECK(run_cli("oracle --edges-csv " + edges + " --tags " + tags + " --out " + out.string() +
                " --budget 1") == 4);
}

TEST_CASE("start-accounts files work without tags") {
  auto dir = fresh_temp_dir("cli_starts");
  std::ofstream(dir / "starts.txt") << "# starting accounts\n"
                                    << addr("a").str() << "\n"
                                    << addr("d").str() << "\n";
  auto out = dir / "out";
  std::string edges = (fixtures_dir() / "table1_edges.csv").string();
  int code = run_cli("detect --edges-csv " + edges + " --start-accounts " +
                     (dir / "starts.txt").string() + " --out " + out.string());
  REQUIRE(code == 0);
  auto report = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(report["cycleCount"] == 3);
  CHECK(report["activity"] == "custom");
}

TEST_CASE("frame cap comes from the environment and fails as a limit") {
  auto out = fresh_temp_dir("cli_frames");
  std::string edges = (fixtures_dir() / "table1_edges.csv").string();
  std::string tags = (fixtures_dir() / "table1_tags.csv").string();
  std::string base = "detect --edges-csv " + edges + " --tags " + tags + " --out " + out.string();
  CHECK(run_cli("env CHAINTRAIL_MAX_FRAMES=1 " + std::string(CHAINTRAIL_BIN) + " " + base,
                /*raw=*/true) == 4);
  CHECK(run_cli("env CHAINTRAIL_MAX_FRAMES=nope " + std::string(CHAINTRAIL_BIN) + " " + base,
                /*raw=*/true) == 2);
  CHECK(run_cli(base + " --max-hops 1") == 2);  // a temporal cycle needs two hops
}

TEST_CASE("gen-fixture round-trips through detect") {
  auto dir = fresh_temp_dir("cli_gen");
  REQUIRE(run_cli("gen-fixture --nodes 13 --edges 21 --planted-cycles 5 --seed 7 --out " +
                  dir.string()) == 0);
  auto out = dir / "run";
  int code = run_cli("detect --edges-csv " + (dir / "edges.csv").string() + " --tags " +
                     (dir / "tags.csv").string() + " --out " + out.string());
  REQUIRE(code == 0);
  auto report = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(report["cycleCount"] == 5);

  CHECK(run_cli("gen-fixture --nodes 3 --edges 10 --planted-cycles 2 --out " + dir.string()) ==
        2);  // infeasible parameters
}
