/*
  pipeline.hpp: end-to-end drivers behind the CLI subcommands.

  detect: ingest -> dedupe -> filter -> merge -> build -> detect -> report,
  writing cycles.csv, report.json, manifest.json (and per-cycle DOT files on
  request) into the output directory. Identical inputs and flags produce
  byte-identical cycles.csv and report.json; wall times live only in the
  manifest.

  oracle: same ingest path, then the brute-force enumerator next to the
  engine, writing raw_cycles.csv and reduction.json (raw vs canonical count).
*/
#pragma once

#include "chaintrail/analytics.hpp"
#include "chaintrail/dot.hpp"
#include "chaintrail/engine.hpp"
#include "chaintrail/graph.hpp"
#include "chaintrail/ingest.hpp"
#include "chaintrail/oracle.hpp"
#include "chaintrail/preprocess.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace chaintrail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DetectOptions {
  std::vector<std::string> external_files;
  std::vector<std::string> internal_files;
  std::vector<std::string> edges_csv_files;
  std::string tags_file;
  std::vector<std::string> start_labels;
  std::string start_accounts_file;
  Ratio alpha = Ratio(10);
  std::optional<std::uint32_t> max_hops;
  bool include_internal = true;
  bool drop_zero_value = true;
  std::uint64_t window_blocks = 100;
  NeighborMode neighbor_mode = NeighborMode::TaggedOnly;
  std::string out_dir = ".";
  bool emit_dot = false;
  std::uint64_t max_frames = 10'000;
};

struct DetectOutcome {
  nlohmann::ordered_json manifest;
  std::size_t cycle_count = 0;
  std::filesystem::path cycles_csv;
  std::filesystem::path report_json;
  std::filesystem::path manifest_json;
};

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
}

inline std::vector<AccountId> load_account_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open file: " + path);
  std::vector<AccountId> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    try {
      out.push_back(AccountId::parse(line));
    } catch (const std::invalid_argument& e) {
      throw IngestError(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

struct LoadedInputs {
  std::vector<Transaction> transactions;
  std::vector<AccountTag> tags;
};

template <typename Opts>
LoadedInputs load_inputs(const Opts& opt) {
  if (opt.external_files.empty() && opt.internal_files.empty() && opt.edges_csv_files.empty()) {
    throw UsageError("no input files; pass --external, --internal or --edges-csv");
  }
  if (!opt.start_labels.empty() && opt.tags_file.empty()) {
    throw UsageError("--start-labels requires --tags");
  }
  if (opt.tags_file.empty() && opt.start_accounts_file.empty()) {
    throw UsageError("no starting accounts; pass --tags or --start-accounts");
  }
  LoadedInputs in;
  for (const std::string& path : opt.external_files) {
    auto txs = load_external_json(path);
    in.transactions.insert(in.transactions.end(), txs.begin(), txs.end());
  }
  for (const std::string& path : opt.internal_files) {
    auto txs = load_internal_json(path);
    in.transactions.insert(in.transactions.end(), txs.begin(), txs.end());
  }
  for (const std::string& path : opt.edges_csv_files) {
    auto txs = load_csv_edges(path);
    in.transactions.insert(in.transactions.end(), txs.begin(), txs.end());
  }
  if (!opt.tags_file.empty()) in.tags = load_tagged_accounts(opt.tags_file);
  return in;
}

// Tagged accounts (optionally restricted to the requested labels), plus the
// explicit account list; one-hop mode widens with out-neighbors.
template <typename Opts>
std::vector<AccountId> resolve_starts(const Opts& opt, const std::vector<AccountTag>& tags,
                                      const TransactionGraph& g) {
  std::set<AccountId> starts;
  if (!opt.start_accounts_file.empty()) {
    for (AccountId& a : load_account_list(opt.start_accounts_file)) starts.insert(std::move(a));
  }
  if (!opt.start_labels.empty()) {
    std::set<std::string> wanted(opt.start_labels.begin(), opt.start_labels.end());
    for (const AccountTag& tag : tags) {
      if (wanted.count(tag.label)) starts.insert(tag.address);
    }
  } else if (opt.start_accounts_file.empty()) {
    for (const AccountTag& tag : tags) starts.insert(tag.address);
  }
  std::vector<AccountId> out(starts.begin(), starts.end());
  if (opt.neighbor_mode == NeighborMode::WithOneHopNeighbors) {
    out = expand_out_neighbors(g, out);
  }
  return out;
}

inline nlohmann::ordered_json json_string_array(const std::vector<std::string>& v) {
  return nlohmann::ordered_json(v);
}

}  // namespace detail

inline DetectOutcome run_detect(const DetectOptions& opt) {
  namespace fs = std::filesystem;
  auto t0 = std::chrono::steady_clock::now();
  detail::LoadedInputs in = detail::load_inputs(opt);
  double ingest_ms = detail::ms_since(t0);
  std::size_t parsed = in.transactions.size();

  DetectionConfig cfg;
  cfg.max_loss_percent = opt.alpha;
  cfg.max_hops = opt.max_hops;
  cfg.include_internal = opt.include_internal;
  cfg.drop_zero_value = opt.drop_zero_value;
  cfg.max_frames = opt.max_frames;
  cfg.validate();

  t0 = std::chrono::steady_clock::now();
  std::size_t duplicate_hashes = 0;
  std::vector<Transaction> txs = drop_duplicate_hashes(in.transactions, &duplicate_hashes);
  txs = filter_transactions(txs, cfg);
  std::size_t filtered = txs.size();
  txs = merge_same_block(txs);
  std::size_t merged = txs.size();
  double preprocess_ms = detail::ms_since(t0);
  if (filtered + duplicate_hashes > parsed || merged > filtered) {
    throw std::logic_error("internal invariant violated: stage counts increased");
  }

  t0 = std::chrono::steady_clock::now();
  TransactionGraph g = build_graph(txs, in.tags);
  double build_ms = detail::ms_since(t0);

  cfg.starting_accounts = detail::resolve_starts(opt, in.tags, g);
  if (cfg.starting_accounts.empty()) {
    throw UsageError("starting account set is empty");
  }

  t0 = std::chrono::steady_clock::now();
  DetectionStats stats;
  std::vector<TemporalCycle> cycles = detect_cycles(g, cfg, &stats);
  double detect_ms = detail::ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  std::string label = opt.start_labels.empty()
                          ? (opt.start_accounts_file.empty() ? "all-tagged" : "custom")
                          : [&] {
                              std::string joined;
                              for (const std::string& l : opt.start_labels) {
                                joined += (joined.empty() ? "" : ",") + l;
                              }
                              return joined;
                            }();
  CycleReport report = build_report(cycles, label, opt.neighbor_mode, opt.alpha);
  std::string csv = cycles_to_csv(cycles, opt.alpha, opt.window_blocks);
  nlohmann::ordered_json report_json = report_to_json(report);
  report_json["windowBlocks"] = opt.window_blocks;
  report_json["suspiciousCycles"] = flag_suspicious(cycles, opt.alpha, opt.window_blocks).size();

  fs::path out_dir(opt.out_dir);
  fs::create_directories(out_dir);
  DetectOutcome outcome;
  outcome.cycle_count = cycles.size();
  outcome.cycles_csv = out_dir / "cycles.csv";
  outcome.report_json = out_dir / "report.json";
  outcome.manifest_json = out_dir / "manifest.json";
  detail::write_file(outcome.cycles_csv, csv);
  detail::write_file(outcome.report_json, report_json.dump(2) + "\n");
  if (opt.emit_dot) {
    for (std::size_t i = 0; i < cycles.size(); ++i) {
      detail::write_file(out_dir / ("cycle_" + std::to_string(i) + ".dot"),
                         cycle_to_dot(cycles[i], g, i));
    }
    detail::write_file(out_dir / "cycles_combined.dot", cycles_to_dot(cycles, g));
  }
  double report_ms = detail::ms_since(t0);

  OracleBudget oracle_budget;
  nlohmann::ordered_json manifest;
  manifest["inputs"] = {{"external", detail::json_string_array(opt.external_files)},
                        {"internal", detail::json_string_array(opt.internal_files)},
                        {"edgesCsv", detail::json_string_array(opt.edges_csv_files)},
                        {"tags", opt.tags_file},
                        {"startAccountsFile", opt.start_accounts_file}};
  nlohmann::ordered_json config;
  config["alphaPercent"] = format_ratio_fixed(opt.alpha);
  if (opt.max_hops) config["maxHops"] = *opt.max_hops;
  else config["maxHops"] = nullptr;
  config["includeInternal"] = opt.include_internal;
  config["dropZeroValue"] = opt.drop_zero_value;
  config["windowBlocks"] = opt.window_blocks;
  config["neighborMode"] = std::string(to_string(opt.neighbor_mode));
  config["startLabels"] = detail::json_string_array(opt.start_labels);
  config["maxFrames"] = opt.max_frames;
  config["emitDot"] = opt.emit_dot;
  manifest["config"] = std::move(config);
  nlohmann::ordered_json counts;
  counts["parsed"] = parsed;
  counts["duplicateHashesDropped"] = duplicate_hashes;
  counts["filtered"] = filtered;
  counts["merged"] = merged;
  counts["nodes"] = g.node_count();
  counts["edges"] = g.edge_count();
  counts["selfLoopsSkipped"] = g.build_report().self_loops_skipped;
  counts["taggedNodesWithoutEdges"] = g.build_report().tagged_nodes_without_edges;
  counts["startingAccounts"] = cfg.starting_accounts.size();
  counts["cyclesCanonical"] = cycles.size();
  counts["rawCapable"] = g.node_count() <= oracle_budget.max_nodes &&
                         g.edge_count() <= oracle_budget.max_edges;
  manifest["counts"] = std::move(counts);
  manifest["stageWallMs"] = {{"ingest", ingest_ms},
                             {"preprocess", preprocess_ms},
                             {"build", build_ms},
                             {"detect", detect_ms},
                             {"report", report_ms}};
  manifest["warnings"] = detail::json_string_array(stats.warnings);
  detail::write_file(outcome.manifest_json, manifest.dump(2) + "\n");
  outcome.manifest = std::move(manifest);
  return outcome;
}

struct OracleOptions {
  std::vector<std::string> external_files;
  std::vector<std::string> internal_files;
  std::vector<std::string> edges_csv_files;
  std::string tags_file;
  std::vector<std::string> start_labels;
  std::string start_accounts_file;
  std::uint32_t max_hops = 10;
  std::uint64_t budget = 1'000'000;
  bool include_internal = true;
  bool drop_zero_value = true;
  NeighborMode neighbor_mode = NeighborMode::TaggedOnly;
  std::string out_dir = ".";
  std::uint64_t max_frames = 10'000;
};

struct OracleOutcome {
  std::size_t raw_count = 0;
  std::size_t canonical_count = 0;
  std::filesystem::path raw_cycles_csv;
  std::filesystem::path reduction_json;
};

inline OracleOutcome run_oracle(const OracleOptions& opt) {
  namespace fs = std::filesystem;
  detail::LoadedInputs in = detail::load_inputs(opt);

  DetectionConfig cfg;
  cfg.include_internal = opt.include_internal;
  cfg.drop_zero_value = opt.drop_zero_value;
  cfg.max_hops = opt.max_hops;
  cfg.max_frames = opt.max_frames;

  std::size_t duplicate_hashes = 0;
  std::vector<Transaction> txs = drop_duplicate_hashes(in.transactions, &duplicate_hashes);
  txs = filter_transactions(txs, cfg);
  txs = merge_same_block(txs);
  TransactionGraph g = build_graph(txs, in.tags);

  cfg.starting_accounts = detail::resolve_starts(opt, in.tags, g);
  if (cfg.starting_accounts.empty()) throw UsageError("starting account set is empty");

  OracleBudget budget;
  budget.max_cycles = opt.budget;
  budget.max_steps = opt.budget > UINT64_MAX / 1000 ? UINT64_MAX : opt.budget * 1000;
  std::vector<RawCycle> raw =
      enumerate_raw_cycles(g, cfg.starting_accounts, opt.max_hops, budget);
  std::vector<TemporalCycle> canonical = detect_cycles(g, cfg);

  std::ostringstream csv;
  csv << "start,hopLength,edges\n";
  for (const RawCycle& cycle : raw) {
    csv << cycle.start.str() << ',' << cycle.edges.size() << ',';
    for (std::size_t i = 0; i < cycle.edges.size(); ++i) {
      const Transaction& tx = g.edge(cycle.edges[i]);
      csv << (i ? ";" : "") << tx.from.str() << "->" << tx.to.str() << "@" << tx.block_number
          << ":" << to_decimal_string(tx.value);
    }
    csv << '\n';
  }

  fs::path out_dir(opt.out_dir);
  fs::create_directories(out_dir);
  OracleOutcome outcome;
  outcome.raw_count = raw.size();
  outcome.canonical_count = canonical.size();
  outcome.raw_cycles_csv = out_dir / "raw_cycles.csv";
  outcome.reduction_json = out_dir / "reduction.json";
  detail::write_file(outcome.raw_cycles_csv, csv.str());
  nlohmann::ordered_json reduction;
  reduction["rawCycles"] = raw.size();
  reduction["canonicalCycles"] = canonical.size();
  reduction["maxHops"] = opt.max_hops;
  detail::write_file(outcome.reduction_json, reduction.dump(2) + "\n");
  return outcome;
}

}  // namespace chaintrail
