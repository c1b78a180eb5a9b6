/*
  oracle.hpp: brute-force enumeration of raw temporal cycles.

  Enumerates every vertex-simple, strictly block-increasing cycle from the
  given start accounts, with no merging, no edge consumption and no
  money-trail pruning: each edge may appear in any number of cycles. Exists to
  test the detection engine and to report before/after reduction counts; it is
  desk-scale only and refuses inputs beyond its budget.
*/
#pragma once

#include "chaintrail/graph.hpp"
#include "chaintrail/types.hpp"

#include <algorithm>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace chaintrail {

struct RawCycle {
  AccountId start;
  std::vector<EdgeId> edges;

  friend bool operator==(const RawCycle&, const RawCycle&) = default;
  friend auto operator<=>(const RawCycle&, const RawCycle&) = default;
};

struct OracleBudget {
  std::size_t max_nodes = 64;
  std::size_t max_edges = 512;
  std::size_t max_cycles = 1'000'000;
  std::uint64_t max_steps = 50'000'000;
};

struct OracleBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

struct RawEnumerator {
  const TransactionGraph& g;
  std::uint32_t max_hops;
  const OracleBudget& budget;
  std::uint64_t steps = 0;
  NodeId start = kInvalidNode;
  std::vector<bool> on_path;
  std::vector<EdgeId> path;
  std::vector<RawCycle>* out;

  void dfs(NodeId node, std::uint64_t last_block) {
    if (++steps > budget.max_steps) {
      throw OracleBudgetExceeded("oracle step budget exceeded; the fixture is too large");
    }
    for (EdgeId e : g.out_edges_after(node, last_block)) {
      NodeId to = g.edge_to(e);
      if (to == start) {
        if (out->size() >= budget.max_cycles) {
          throw OracleBudgetExceeded("oracle cycle budget exceeded");
        }
        RawCycle cycle;
        cycle.start = g.account(start);
        cycle.edges = path;
        cycle.edges.push_back(e);
        out->push_back(std::move(cycle));
        continue;
      }
      if (on_path[to]) continue;
      if (path.size() + 2 > max_hops) continue;  // could not close within the cap
      on_path[to] = true;
      path.push_back(e);
      dfs(to, g.edge(e).block_number);
      path.pop_back();
      on_path[to] = false;
    }
  }
};

}  // namespace detail

// Complete set of raw temporal cycles from any start account, as a
// deterministically sorted sequence (set semantics, keyed by start node and
// edge sequence). maxHops must be at least 2.
inline std::vector<RawCycle> enumerate_raw_cycles(const TransactionGraph& g,
                                                  std::span<const AccountId> starts,
                                                  std::uint32_t max_hops,
                                                  const OracleBudget& budget = {}) {
  if (max_hops < 2) {
    throw std::invalid_argument("oracle max_hops must be >= 2");
  }
  if (g.node_count() > budget.max_nodes || g.edge_count() > budget.max_edges) {
    throw OracleBudgetExceeded("graph exceeds the oracle's node/edge budget (" +
                               std::to_string(g.node_count()) + " nodes, " +
                               std::to_string(g.edge_count()) + " edges)");
  }
  std::vector<RawCycle> cycles;
  std::set<NodeId> start_nodes;
  for (const AccountId& a : starts) {
    NodeId n = g.find_node(a);
    if (n != kInvalidNode) start_nodes.insert(n);
  }
  detail::RawEnumerator en{g, max_hops, budget, 0, kInvalidNode, {}, {}, &cycles};
  en.on_path.assign(g.node_count(), false);
  for (NodeId s : start_nodes) {
    en.start = s;
    // First hop has no lower block bound; later hops strictly increase.
    for (EdgeId e : g.out_edges(s)) {
      NodeId to = g.edge_to(e);
      en.on_path[to] = true;
      en.path.push_back(e);
      en.dfs(to, g.edge(e).block_number);
      en.path.pop_back();
      en.on_path[to] = false;
    }
  }
  std::sort(cycles.begin(), cycles.end());
  cycles.erase(std::unique(cycles.begin(), cycles.end()), cycles.end());
  return cycles;
}

}  // namespace chaintrail
