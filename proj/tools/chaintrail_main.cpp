// chaintrail: temporal money-flow cycle forensics over transaction graphs.
//
// Subcommands:
//   detect       ingest -> preprocess -> build -> detect -> report pipeline
//   oracle       brute-force raw cycle enumeration + reduction summary
//   gen-fixture  deterministic synthetic fixtures with planted cycles
//
// Exit codes: 0 success, 2 usage, 3 input parse, 4 budget/limits,
// 5 internal invariant violation.

#include "chaintrail/fixture.hpp"
#include "chaintrail/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

namespace {

std::vector<std::string> split_labels(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::uint64_t max_frames_from_env() {
  const char* env = std::getenv("CHAINTRAIL_MAX_FRAMES");
  if (!env || !*env) return 10'000;
  return chaintrail::parse_u64(env, "CHAINTRAIL_MAX_FRAMES");
}

struct CommonArgs {
  std::vector<std::string> external_files, internal_files, edges_csv_files;
  std::string tags_file, start_labels_csv, start_accounts_file;
  bool include_internal = true;
  bool drop_zero_value = true;
  std::string neighbor_mode = "tagged";
  std::string out_dir = ".";

  void attach(CLI::App& cmd) {
    cmd.add_option("--external", external_files, "external transaction JSON file(s)");
    cmd.add_option("--internal", internal_files, "internal transaction JSON file(s)");
    cmd.add_option("--edges-csv", edges_csv_files, "plain CSV edge file(s)");
    cmd.add_option("--tags", tags_file, "tagged accounts CSV (address,label)");
    cmd.add_option("--start-labels", start_labels_csv,
                   "comma-separated activity labels selecting starting accounts");
    cmd.add_option("--start-accounts", start_accounts_file,
                   "file with one starting address per line");
    cmd.add_option("--include-internal", include_internal,
                   "keep internal transactions (default true)");
    cmd.add_option("--drop-zero-value", drop_zero_value,
                   "drop zero-value transactions (default true)");
    cmd.add_option("--neighbor-mode", neighbor_mode, "tagged | one-hop (default tagged)")
        ->check(CLI::IsMember({"tagged", "one-hop"}));
    cmd.add_option("--out", out_dir, "output directory (default .)");
  }

  template <typename Opts>
  void fill(Opts& opt) const {
    opt.external_files = external_files;
    opt.internal_files = internal_files;
    opt.edges_csv_files = edges_csv_files;
    opt.tags_file = tags_file;
    opt.start_labels = split_labels(start_labels_csv);
    opt.start_accounts_file = start_accounts_file;
    opt.include_internal = include_internal;
    opt.drop_zero_value = drop_zero_value;
    opt.neighbor_mode = neighbor_mode == "one-hop"
                            ? chaintrail::NeighborMode::WithOneHopNeighbors
                            : chaintrail::NeighborMode::TaggedOnly;
    opt.out_dir = out_dir;
    opt.max_frames = max_frames_from_env();
  }
};

int run_detect_cmd(const CommonArgs& common, const std::string& alpha,
                   std::int64_t max_hops, std::uint64_t window_blocks,
                   const std::vector<std::string>& emit) {
  chaintrail::DetectOptions opt;
  common.fill(opt);
  opt.alpha = chaintrail::parse_percent(alpha, "--alpha");
  if (max_hops >= 0) opt.max_hops = static_cast<std::uint32_t>(max_hops);
  opt.window_blocks = window_blocks;
  for (const std::string& kind : emit) {
    if (kind == "dot") opt.emit_dot = true;  // csv and json are always written
  }
  chaintrail::DetectOutcome outcome = chaintrail::run_detect(opt);
  std::cout << "detected " << outcome.cycle_count << " temporal cycle(s)\n"
            << "  " << outcome.cycles_csv.string() << "\n"
            << "  " << outcome.report_json.string() << "\n"
            << "  " << outcome.manifest_json.string() << "\n";
  return 0;
}

int run_oracle_cmd(const CommonArgs& common, std::uint64_t max_hops, std::uint64_t budget) {
  chaintrail::OracleOptions opt;
  common.fill(opt);
  opt.max_hops = static_cast<std::uint32_t>(max_hops);
  opt.budget = budget;
  chaintrail::OracleOutcome outcome = chaintrail::run_oracle(opt);
  std::cout << "raw cycles:       " << outcome.raw_count << "\n"
            << "canonical cycles: " << outcome.canonical_count << "\n"
            << "  " << outcome.raw_cycles_csv.string() << "\n"
            << "  " << outcome.reduction_json.string() << "\n";
  return 0;
}

int run_gen_fixture_cmd(std::uint64_t nodes, std::uint64_t edges, std::uint64_t cycles,
                        std::uint64_t seed, const std::string& out_dir) {
  chaintrail::FixtureParams params{nodes, edges, cycles, seed};
  chaintrail::GeneratedFixture fx = chaintrail::generate_fixture(params);
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  chaintrail::detail::write_file(dir / "edges.csv", fx.edges_csv());
  chaintrail::detail::write_file(dir / "tags.csv", fx.tags_csv());
  chaintrail::detail::write_file(dir / "truth.json", fx.truth.dump(2) + "\n");
  std::cout << "fixture with " << cycles << " planted cycle(s), " << fx.transactions.size()
            << " edges -> " << dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal money-flow cycle detection for transaction graphs"};
  app.require_subcommand(1);

  CLI::App* detect = app.add_subcommand("detect", "run the full detection pipeline");
  CommonArgs detect_common;
  detect_common.attach(*detect);
  std::string alpha = "10";
  std::int64_t max_hops = -1;
  std::uint64_t window_blocks = 100;
  std::vector<std::string> emit;
  detect->add_option("--alpha", alpha, "loss threshold percent (default 10)");
  detect->add_option("--max-hops", max_hops, "cap on cycle hop length (>= 2)");
  detect->add_option("--window-blocks", window_blocks,
                     "short-window flag threshold in blocks (default 100)");
  detect->add_option("--emit", emit, "extra artifacts: json | csv | dot (repeatable)")
      ->check(CLI::IsMember({"json", "csv", "dot"}));

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force raw cycle enumeration");
  CommonArgs oracle_common;
  oracle_common.attach(*oracle);
  std::uint64_t oracle_hops = 10;
  std::uint64_t budget = 1'000'000;
  oracle->add_option("--max-hops", oracle_hops, "raw enumeration hop cap (default 10)");
  oracle->add_option("--budget", budget, "raw cycle budget (default 1000000)");

  CLI::App* gen = app.add_subcommand("gen-fixture", "generate a synthetic fixture");
  std::uint64_t nodes = 0, edges = 0, planted = 0, seed = 0;
  std::string gen_out = ".";
  gen->add_option("--nodes", nodes, "node budget")->required();
  gen->add_option("--edges", edges, "edge budget")->required();
  gen->add_option("--planted-cycles", planted, "number of planted cycles")->required();
  gen->add_option("--seed", seed, "RNG seed (default 0)");
  gen->add_option("--out", gen_out, "output directory (default .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(detect)) {
      return run_detect_cmd(detect_common, alpha, max_hops, window_blocks, emit);
    }
    if (app.got_subcommand(oracle)) {
      return run_oracle_cmd(oracle_common, oracle_hops, budget);
    }
    return run_gen_fixture_cmd(nodes, edges, planted, seed, gen_out);
  } catch (const chaintrail::UsageError& e) {
    std::cerr << "chaintrail: usage: " << e.what() << "\n";
    return 2;
  } catch (const chaintrail::IngestError& e) {
    std::cerr << "chaintrail: input: " << e.what() << "\n";
    return 3;
  } catch (const chaintrail::FrameLimitExceeded& e) {
    std::cerr << "chaintrail: limits: " << e.what() << "\n";
    return 4;
  } catch (const chaintrail::OracleBudgetExceeded& e) {
    std::cerr << "chaintrail: budget: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "chaintrail: usage: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "chaintrail: internal: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "chaintrail: " << e.what() << "\n";
    return 1;
  }
}
