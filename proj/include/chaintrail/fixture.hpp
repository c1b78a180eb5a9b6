/*
  fixture.hpp: deterministic synthetic fixtures with planted cycles.

  Layout: C planted two-hop cycles on dedicated node pairs (X_i -> Y_i at
  block b_i, Y_i -> X_i at b_i + 2), plus an acyclic probe structure that
  every exploration must wade through before closing: Y_i links to a shared
  hub at b_i + 1 (earlier block, so it is probed first) and the hub fans out
  to dead-end nodes at high blocks. The fan is what makes each planted
  cycle's discovery cost proportional to graph size, which the complexity
  sweep relies on. Same seed, byte-identical output.
*/
#pragma once

#include "chaintrail/ingest.hpp"
#include "chaintrail/types.hpp"

#include <json.hpp>

#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace chaintrail {

struct FixtureParams {
  std::uint64_t nodes = 0;
  std::uint64_t edges = 0;
  std::uint64_t planted_cycles = 0;
  std::uint64_t seed = 0;
};

struct GeneratedFixture {
  std::vector<Transaction> transactions;
  std::vector<AccountTag> tags;
  nlohmann::ordered_json truth;

  std::string edges_csv() const {
    std::string out = std::string(kEdgeCsvHeader) + "\n";
    for (const Transaction& tx : transactions) out += transaction_to_csv_row(tx) + "\n";
    return out;
  }

  std::string tags_csv() const {
    std::string out = "address,label\n";
    for (const AccountTag& tag : tags) out += tag.address.str() + "," + tag.label + "\n";
    return out;
  }
};

namespace detail {

inline AccountId fixture_address(std::uint64_t index) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "0x%040llx", static_cast<unsigned long long>(index + 1));
  return AccountId::parse(buf);
}

}  // namespace detail

inline GeneratedFixture generate_fixture(const FixtureParams& params) {
  const std::uint64_t c = params.planted_cycles;
  if (params.edges < 2 * c) {
    throw std::invalid_argument("infeasible fixture: " + std::to_string(c) +
                                " planted cycles need at least " + std::to_string(2 * c) +
                                " edges");
  }
  if (params.nodes < 2 * c) {
    throw std::invalid_argument("infeasible fixture: " + std::to_string(c) +
                                " planted cycles need at least " + std::to_string(2 * c) +
                                " nodes");
  }
  const std::uint64_t extra = params.edges - 2 * c;
  std::uint64_t hub = 0, pool = 0;
  if (extra > 0) {
    if (params.nodes < 2 * c + 1) {
      throw std::invalid_argument("infeasible fixture: filler edges need a hub node");
    }
    hub = 2 * c;
    pool = params.nodes - 2 * c - 1;
  }
  const std::uint64_t links = c > 0 ? std::min(c, extra) : 0;
  const std::uint64_t fan = extra - links;
  if (fan > 0 && pool == 0) {
    throw std::invalid_argument("infeasible fixture: filler edges need dead-end nodes");
  }

  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<std::uint64_t> value_dist(1, 1'000'000'000ULL);
  std::uniform_int_distribution<std::uint64_t> ratio_dist(80, 120);

  GeneratedFixture fx;
  const Wei kEther = Wei("1000000000000000000");
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (std::uint64_t i = 0; i < c; ++i) {
    AccountId x = detail::fixture_address(2 * i);
    AccountId y = detail::fixture_address(2 * i + 1);
    std::uint64_t block = 100 + 10 * i;
    Wei out_value = Wei(value_dist(rng)) * kEther;
    Wei back_value = out_value * ratio_dist(rng) / 100;  // loss within +-20%

    Transaction out_tx;
    out_tx.from = x;
    out_tx.to = y;
    out_tx.block_number = block;
    out_tx.value = out_value;
    fx.transactions.push_back(out_tx);

    Transaction back_tx;
    back_tx.from = y;
    back_tx.to = x;
    back_tx.block_number = block + 2;
    back_tx.value = back_value;
    fx.transactions.push_back(back_tx);

    fx.tags.push_back({x, "Planted"});

    nlohmann::ordered_json pair;
    pair["start"] = x.str();
    pair["via"] = y.str();
    pair["outBlock"] = block;
    pair["backBlock"] = block + 2;
    pair["outValueWei"] = to_decimal_string(out_value);
    pair["backValueWei"] = to_decimal_string(back_value);
    pairs.push_back(std::move(pair));
  }
  for (std::uint64_t i = 0; i < links; ++i) {
    Transaction link;
    link.from = detail::fixture_address(2 * i + 1);
    link.to = detail::fixture_address(hub);
    link.block_number = 100 + 10 * i + 1;  // probed before the return edge
    link.value = 1;
    fx.transactions.push_back(link);
  }
  const std::uint64_t fan_base_block = 100 + 10 * c + 5;
  for (std::uint64_t j = 0; j < fan; ++j) {
    Transaction probe;
    probe.from = detail::fixture_address(hub);
    probe.to = detail::fixture_address(2 * c + 1 + (j % pool));
    probe.block_number = fan_base_block + j;
    probe.value = 1;
    fx.transactions.push_back(probe);
  }

  fx.truth["plantedCycles"] = c;
  fx.truth["nodeBudget"] = params.nodes;
  fx.truth["edgeCount"] = fx.transactions.size();
  fx.truth["seed"] = params.seed;
  fx.truth["pairs"] = std::move(pairs);
  return fx;
}

}  // namespace chaintrail
