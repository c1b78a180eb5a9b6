/*
  dot.hpp: Graphviz export of detected cycles.

  Nodes are labeled by the last four hex characters of the address, edges by
  "block:valueEther" with exact decimal conversion. One edge per bundle
  member, so parallel transfers stay visible.
*/
#pragma once

#include "chaintrail/engine.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace chaintrail {

namespace detail {

inline void append_cycle_edges(std::ostringstream& out, const TemporalCycle& c,
                               const TransactionGraph& g) {
  for (const MergedEdge& hop : c.hops) {
    for (EdgeId e : hop.members) {
      const Transaction& tx = g.edge(e);
      out << "  \"" << hop.from.str() << "\" -> \"" << hop.to.str() << "\" [label=\""
          << tx.block_number << ":" << wei_to_ether(tx.value) << "\"];\n";
    }
  }
}

inline void append_cycle_nodes(std::ostringstream& out, const TemporalCycle& c,
                               std::vector<AccountId>& declared) {
  auto declare = [&](const AccountId& a) {
    for (const AccountId& seen : declared) {
      if (seen == a) return;
    }
    declared.push_back(a);
    out << "  \"" << a.str() << "\" [label=\"" << a.last4() << "\"];\n";
  };
  declare(c.start);
  for (const MergedEdge& hop : c.hops) declare(hop.to);
}

}  // namespace detail

inline std::string cycle_to_dot(const TemporalCycle& c, const TransactionGraph& g,
                                std::size_t index) {
  std::ostringstream out;
  out << "digraph cycle_" << index << " {\n  rankdir=LR;\n";
  std::vector<AccountId> declared;
  detail::append_cycle_nodes(out, c, declared);
  detail::append_cycle_edges(out, c, g);
  out << "}\n";
  return out.str();
}

inline std::string cycles_to_dot(std::span<const TemporalCycle> cycles,
                                 const TransactionGraph& g) {
  std::ostringstream out;
  out << "digraph cycles {\n  rankdir=LR;\n";
  std::vector<AccountId> declared;
  for (const TemporalCycle& c : cycles) detail::append_cycle_nodes(out, c, declared);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    out << "  // cycle " << i << "\n";
    detail::append_cycle_edges(out, cycles[i], g);
  }
  out << "}\n";
  return out.str();
}

}  // namespace chaintrail
