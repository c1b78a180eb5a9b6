/*
  analytics.hpp: post-detection analysis and report serialization.

  Loss percentages are exact rationals; the alpha threshold is inclusive
  (loss <= alpha). Reports render rationals to 4 decimal places; CSV/JSON
  output is byte-deterministic for a given input.
*/
#pragma once

#include "chaintrail/engine.hpp"
#include "chaintrail/graph.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace chaintrail {

enum class NeighborMode : std::uint8_t { TaggedOnly, WithOneHopNeighbors };

inline std::string_view to_string(NeighborMode m) {
  return m == NeighborMode::TaggedOnly ? "tagged-only" : "with-one-hop-neighbors";
}

struct CycleReport {
  std::string activity_label;
  NeighborMode neighbor_mode = NeighborMode::TaggedOnly;
  std::size_t cycle_count = 0;
  std::uint32_t max_hop_length = 0;
  Ratio alpha;  // threshold used for count_within_loss
  std::size_t count_within_loss = 0;
  std::size_t unique_accounts = 0;
  std::map<std::uint32_t, std::size_t> hop_histogram;
};

enum class SuspicionReason : std::uint8_t { NegativeLoss, LowLoss, ShortWindow };

inline std::string_view to_string(SuspicionReason r) {
  switch (r) {
    case SuspicionReason::NegativeLoss: return "NegativeLoss";
    case SuspicionReason::LowLoss: return "LowLoss";
    default: return "ShortWindow";
  }
}

struct SuspicionFlag {
  std::size_t cycle_index = 0;          // into the cycle sequence it was built from
  std::set<SuspicionReason> reasons;    // never empty
};

inline Ratio money_loss(const TemporalCycle& c) {
  return loss_percent(c.out_value, c.returned_value);
}

// Cycles with loss <= alpha, original order preserved.
inline std::vector<TemporalCycle> filter_by_loss(std::span<const TemporalCycle> cycles,
                                                 const Ratio& alpha) {
  std::vector<TemporalCycle> out;
  for (const TemporalCycle& c : cycles) {
    if (money_loss(c) <= alpha) out.push_back(c);
  }
  return out;
}

inline std::map<std::uint32_t, std::size_t> hop_distribution(
    std::span<const TemporalCycle> cycles) {
  std::map<std::uint32_t, std::size_t> hist;
  for (const TemporalCycle& c : cycles) ++hist[c.hop_length];
  return hist;
}

struct CycleActivity {
  std::size_t cycle_index = 0;
  std::set<std::string> labels;  // distinct activity labels over all accounts
  bool multi_activity = false;   // touches >= 2 labels
};

// Labels touched by each cycle's accounts (start and intermediates).
inline std::vector<CycleActivity> cross_activity_report(std::span<const TemporalCycle> cycles,
                                                        const TransactionGraph& g) {
  std::vector<CycleActivity> out;
  out.reserve(cycles.size());
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    CycleActivity row;
    row.cycle_index = i;
    for (const MergedEdge& hop : cycles[i].hops) {
      for (const AccountId* account : {&hop.from, &hop.to}) {
        NodeId n = g.find_node(*account);
        if (n == kInvalidNode) continue;
        const auto& labels = g.tags_of(n);
        row.labels.insert(labels.begin(), labels.end());
      }
    }
    row.multi_activity = row.labels.size() >= 2;
    out.push_back(std::move(row));
  }
  return out;
}

// NegativeLoss: loss < 0. LowLoss: 0 <= loss <= alpha. ShortWindow: the cycle
// completes within `window_blocks` blocks. Cycles with no reason are omitted.
inline std::vector<SuspicionFlag> flag_suspicious(std::span<const TemporalCycle> cycles,
                                                  const Ratio& alpha,
                                                  std::uint64_t window_blocks) {
  std::vector<SuspicionFlag> out;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    const TemporalCycle& c = cycles[i];
    Ratio loss = money_loss(c);
    SuspicionFlag flag;
    flag.cycle_index = i;
    if (loss < 0) flag.reasons.insert(SuspicionReason::NegativeLoss);
    if (loss >= 0 && loss <= alpha) flag.reasons.insert(SuspicionReason::LowLoss);
    if (c.end_block - c.start_block <= window_blocks) {
      flag.reasons.insert(SuspicionReason::ShortWindow);
    }
    if (!flag.reasons.empty()) out.push_back(std::move(flag));
  }
  return out;
}

inline CycleReport build_report(std::span<const TemporalCycle> cycles,
                                const std::string& label, NeighborMode mode,
                                const Ratio& alpha = Ratio(10)) {
  CycleReport report;
  report.activity_label = label;
  report.neighbor_mode = mode;
  report.alpha = alpha;
  report.cycle_count = cycles.size();
  report.hop_histogram = hop_distribution(cycles);
  std::set<AccountId> accounts;
  for (const TemporalCycle& c : cycles) {
    report.max_hop_length = std::max(report.max_hop_length, c.hop_length);
    if (money_loss(c) <= alpha) ++report.count_within_loss;
    for (const MergedEdge& hop : c.hops) {
      accounts.insert(hop.from);
      accounts.insert(hop.to);
    }
  }
  report.unique_accounts = accounts.size();
  return report;
}

// Starting-set expansion for the one-hop mode: tagged accounts plus the
// accounts they send funds to (out-neighbors only).
inline std::vector<AccountId> expand_out_neighbors(const TransactionGraph& g,
                                                   std::span<const AccountId> accounts) {
  std::set<AccountId> out(accounts.begin(), accounts.end());
  for (const AccountId& a : accounts) {
    NodeId n = g.find_node(a);
    if (n == kInvalidNode) continue;
    for (EdgeId e : g.out_edges(n)) out.insert(g.account(g.edge_to(e)));
  }
  return {out.begin(), out.end()};
}

// --- serialization ---------------------------------------------------------

inline constexpr const char* kCycleCsvHeader =
    "start,hopLength,startBlock,endBlock,outValueWei,returnedValueWei,lossPercent,flags";

inline std::string cycles_to_csv(std::span<const TemporalCycle> cycles, const Ratio& alpha,
                                 std::uint64_t window_blocks) {
  std::vector<std::string> flag_column(cycles.size());
  for (const SuspicionFlag& flag : flag_suspicious(cycles, alpha, window_blocks)) {
    std::string joined;
    for (SuspicionReason r : flag.reasons) {
      joined += (joined.empty() ? "" : ";") + std::string(to_string(r));
    }
    flag_column[flag.cycle_index] = std::move(joined);
  }
  std::ostringstream out;
  out << kCycleCsvHeader << '\n';
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    const TemporalCycle& c = cycles[i];
    out << c.start.str() << ',' << c.hop_length << ',' << c.start_block << ',' << c.end_block
        << ',' << to_decimal_string(c.out_value) << ',' << to_decimal_string(c.returned_value)
        << ',' << format_ratio_fixed(c.loss_percent) << ',' << flag_column[i] << '\n';
  }
  return out.str();
}

inline nlohmann::ordered_json report_to_json(const CycleReport& report) {
  nlohmann::ordered_json j;
  j["activity"] = report.activity_label;
  j["neighborMode"] = std::string(to_string(report.neighbor_mode));
  j["cycleCount"] = report.cycle_count;
  j["maxHopLength"] = report.max_hop_length;
  j["alphaPercent"] = format_ratio_fixed(report.alpha);
  j["cyclesWithinAlphaLoss"] = report.count_within_loss;
  j["uniqueAccounts"] = report.unique_accounts;
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [hops, count] : report.hop_histogram) {
    hist[std::to_string(hops)] = count;
  }
  j["hopHistogram"] = std::move(hist);
  return j;
}

}  // namespace chaintrail
