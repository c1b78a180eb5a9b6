/*
  preprocess.hpp: the cleaning pipeline between ingest and graph build.

  Order of stages as the CLI composes them: drop exact txHash duplicates,
  filter (errored / zero-value / internal per config), merge same-block
  same-pair transfers. Each stage is a pure function over sequences.
*/
#pragma once

#include "chaintrail/types.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <tuple>
#include <vector>

namespace chaintrail {

// Drops records whose non-empty txHash was already seen (overlapping export
// files); first occurrence wins, order preserved.
inline std::vector<Transaction> drop_duplicate_hashes(std::span<const Transaction> txs,
                                                      std::size_t* dropped = nullptr) {
  std::vector<Transaction> out;
  out.reserve(txs.size());
  std::set<std::string> seen;
  std::size_t drops = 0;
  for (const Transaction& tx : txs) {
    if (!tx.tx_hash.empty() && !seen.insert(tx.tx_hash).second) {
      ++drops;
      continue;
    }
    out.push_back(tx);
  }
  if (dropped) *dropped = drops;
  return out;
}

// Keeps only successful transactions; zero-value and internal records drop
// according to the config. Relative order is preserved.
inline std::vector<Transaction> filter_transactions(std::span<const Transaction> txs,
                                                    const DetectionConfig& cfg) {
  std::vector<Transaction> out;
  out.reserve(txs.size());
  for (const Transaction& tx : txs) {
    if (tx.is_error) continue;
    if (cfg.drop_zero_value && tx.value == 0) continue;
    if (!cfg.include_internal && tx.is_internal) continue;
    out.push_back(tx);
  }
  return out;
}

// Merges every (from, to, blockNumber, isInternal) group into one record:
// value/gas/gasUsed sum, gasPrice is the max of the group (it only matters as
// a priority tiebreak), mergedCount counts constituents. Internal and external
// transfers never merge with each other. Output sorted by
// (blockNumber, from, to, isInternal); total Wei is conserved.
inline std::vector<Transaction> merge_same_block(std::span<const Transaction> txs) {
  using Key = std::tuple<std::uint64_t, std::string, std::string, bool>;
  std::map<Key, Transaction> groups;
  for (const Transaction& tx : txs) {
    Key key{tx.block_number, tx.from.str(), tx.to.str(), tx.is_internal};
    auto it = groups.find(key);
    if (it == groups.end()) {
      groups.emplace(std::move(key), tx);
      continue;
    }
    Transaction& merged = it->second;
    merged.value += tx.value;
    merged.gas += tx.gas;
    merged.gas_used += tx.gas_used;
    merged.gas_price = std::max(merged.gas_price, tx.gas_price);
    merged.merged_count += tx.merged_count;
    merged.creates_contract = merged.creates_contract || tx.creates_contract;
  }
  std::vector<Transaction> out;
  out.reserve(groups.size());
  for (auto& [key, tx] : groups) out.push_back(std::move(tx));
  return out;
}

}  // namespace chaintrail
