/*
  graph.hpp: immutable temporal multigraph over transactions.

  One node per distinct address, one edge per admitted transaction. Per-node
  adjacency is sorted by the detection priority key
      (blockNumber asc, value desc, gasPrice desc, txHash asc, ordinal asc)
  so "out-edges strictly after block b" is a contiguous suffix found by binary
  search, already in priority order. The graph never mutates after build;
  concurrent readers are safe.
*/
#pragma once

#include "chaintrail/types.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace chaintrail {

struct ContactEvent {
  EdgeId edge = 0;
  AccountId from;
  AccountId to;
  std::uint64_t block_number = 0;
  Wei value;
};

struct BuildReport {
  std::size_t self_loops_skipped = 0;
  std::vector<std::size_t> self_loop_indices;   // indices into the input sequence
  std::size_t tagged_nodes_without_edges = 0;   // tagged accounts absent from any edge
};

class TransactionGraph;
TransactionGraph build_graph(std::span<const Transaction> transactions,
                             std::span<const AccountTag> tags);

class TransactionGraph {
 public:
  std::size_t node_count() const { return accounts_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const Transaction& edge(EdgeId e) const { return edges_[e]; }
  NodeId edge_from(EdgeId e) const { return from_node_[e]; }
  NodeId edge_to(EdgeId e) const { return to_node_[e]; }

  const AccountId& account(NodeId n) const { return accounts_[n]; }
  AccountKind kind(NodeId n) const { return kinds_[n]; }

  NodeId find_node(const AccountId& a) const {
    auto it = node_index_.find(a);
    return it == node_index_.end() ? kInvalidNode : it->second;
  }

  std::span<const EdgeId> out_edges(NodeId n) const { return out_adj_[n]; }

  // Priority key comparison between two edges; total order (final tiebreak is
  // the edge ordinal, i.e. input order).
  bool edge_priority_less(EdgeId a, EdgeId b) const {
    const Transaction& ta = edges_[a];
    const Transaction& tb = edges_[b];
    if (ta.block_number != tb.block_number) return ta.block_number < tb.block_number;
    if (ta.value != tb.value) return ta.value > tb.value;
    if (ta.gas_price != tb.gas_price) return ta.gas_price > tb.gas_price;
    if (ta.tx_hash != tb.tx_hash) return ta.tx_hash < tb.tx_hash;
    return a < b;
  }

  // Out-edges of `n` with block strictly greater than `after_block`, in
  // priority order. The adjacency sort makes this a suffix.
  std::span<const EdgeId> out_edges_after(NodeId n, std::uint64_t after_block) const {
    std::span<const EdgeId> all = out_adj_[n];
    auto it = std::upper_bound(all.begin(), all.end(), after_block,
                               [this](std::uint64_t b, EdgeId e) {
                                 return b < edges_[e].block_number;
                               });
    return all.subspan(static_cast<std::size_t>(it - all.begin()));
  }

  // Unknown accounts yield an empty sequence; tagged accounts may legitimately
  // have no outgoing edges.
  std::span<const EdgeId> out_edges_after(const AccountId& a, std::uint64_t after_block) const {
    NodeId n = find_node(a);
    if (n == kInvalidNode) return {};
    return out_edges_after(n, after_block);
  }

  // All edges globally ordered by (blockNumber, priority key).
  std::vector<ContactEvent> contact_sequence() const {
    std::vector<EdgeId> order(edges_.size());
    for (EdgeId e = 0; e < edges_.size(); ++e) order[e] = e;
    std::sort(order.begin(), order.end(),
              [this](EdgeId a, EdgeId b) { return edge_priority_less(a, b); });
    std::vector<ContactEvent> events;
    events.reserve(order.size());
    for (EdgeId e : order) {
      const Transaction& t = edges_[e];
      events.push_back({e, t.from, t.to, t.block_number, t.value});
    }
    return events;
  }

  // Activity labels of a node; empty set if untagged.
  const std::set<std::string>& tags_of(NodeId n) const {
    auto it = tag_index_.find(n);
    return it == tag_index_.end() ? kNoTags : it->second;
  }

  const std::map<NodeId, std::set<std::string>>& tag_index() const { return tag_index_; }

  const BuildReport& build_report() const { return report_; }

 private:
  friend TransactionGraph build_graph(std::span<const Transaction>,
                                      std::span<const AccountTag>);

  NodeId intern(const AccountId& a) {
    auto [it, inserted] = node_index_.try_emplace(a, static_cast<NodeId>(accounts_.size()));
    if (inserted) {
      accounts_.push_back(a);
      kinds_.push_back(AccountKind::Unknown);
      out_adj_.emplace_back();
    }
    return it->second;
  }

  std::vector<AccountId> accounts_;
  std::vector<AccountKind> kinds_;
  std::unordered_map<AccountId, NodeId> node_index_;
  std::vector<Transaction> edges_;
  std::vector<NodeId> from_node_;
  std::vector<NodeId> to_node_;
  std::vector<std::vector<EdgeId>> out_adj_;
  std::map<NodeId, std::set<std::string>> tag_index_;
  BuildReport report_;

  inline static const std::set<std::string> kNoTags{};
};

// Builds the immutable graph. Self-loops carry no trail information and are
// skipped (counted in the report). Tagged accounts become nodes even when no
// admitted transaction touches them.
inline TransactionGraph build_graph(std::span<const Transaction> transactions,
                                    std::span<const AccountTag> tags) {
  TransactionGraph g;
  g.edges_.reserve(transactions.size());
  for (std::size_t i = 0; i < transactions.size(); ++i) {
    const Transaction& t = transactions[i];
    if (t.from == t.to) {
      ++g.report_.self_loops_skipped;
      g.report_.self_loop_indices.push_back(i);
      continue;
    }
    NodeId from = g.intern(t.from);
    NodeId to = g.intern(t.to);
    if (t.creates_contract) g.kinds_[to] = AccountKind::Sc;
    EdgeId e = static_cast<EdgeId>(g.edges_.size());
    g.edges_.push_back(t);
    g.from_node_.push_back(from);
    g.to_node_.push_back(to);
    g.out_adj_[from].push_back(e);
  }
  for (const AccountTag& tag : tags) {
    NodeId n = g.intern(tag.address);
    g.tag_index_[n].insert(tag.label);
  }
  for (const auto& [node, labels] : g.tag_index_) {
    if (g.out_adj_[node].empty()) {
      bool has_in = false;
      for (NodeId t : g.to_node_) {
        if (t == node) { has_in = true; break; }
      }
      if (!has_in) ++g.report_.tagged_nodes_without_edges;
    }
  }
  for (auto& adj : g.out_adj_) {
    std::sort(adj.begin(), adj.end(),
              [&g](EdgeId a, EdgeId b) { return g.edge_priority_less(a, b); });
  }
  return g;
}

}  // namespace chaintrail
