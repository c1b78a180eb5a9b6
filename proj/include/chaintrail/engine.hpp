/*
  engine.hpp: temporal cycle detection.

  Priority-ordered depth-first exploration from tagged starting accounts.
  Edges carry three states (unvisited / partially visited / finally visited);
  vertices are visited per exploration path, with the start account exempt so
  the cycle can close. Three reductions shape the output:

    1. Parallel edges between the same ordered pair that are temporally
       admissible together travel as one bundle with summed value. The start
       hop bundles every not-yet-consumed parallel start edge.
    2. A single global priority order over starting edges
       (blockNumber asc, value desc, gasPrice desc, then a deterministic
       tiebreak) decides which cycle claims shared edges first.
    3. A node stops expanding once the value committed to cycles out of it
       reaches the value that arrived into it ("outValue < inValue" guard);
       until then a committed prefix may appear in further cycles.

  Bundles are pruned at commit time to members that participate in at least
  one strictly block-increasing selection across the whole cycle; pruned
  members that no cycle consumed revert to unvisited and stay available.
  Admissibility of the next hop is checked against the minimum member block
  of the incoming bundle. Detection is sequential and deterministic; the
  graph is only read.
*/
#pragma once

#include "chaintrail/graph.hpp"
#include "chaintrail/types.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace chaintrail {

enum class EdgeState : std::uint8_t { Unvisited, PartiallyVisited, FinallyVisited };

// One hop of a committed cycle: parallel transactions folded into a single
// edge with summed value. Members are sorted by block number.
struct MergedEdge {
  AccountId from;
  AccountId to;
  std::vector<EdgeId> members;
  std::vector<std::uint64_t> block_numbers;
  Wei total_value;
};

struct TemporalCycle {
  AccountId start;
  std::vector<MergedEdge> hops;
  std::uint32_t hop_length = 0;
  std::uint64_t start_block = 0;  // minimum block of the first hop
  std::uint64_t end_block = 0;    // maximum block of the last hop
  Wei out_value;                  // total leaving the start on the first hop
  Wei returned_value;             // total returning on the last hop
  Ratio loss_percent;             // 100*(out-returned)/out; negative = net gain
};

struct DetectionStats {
  std::uint64_t explorations = 0;
  std::uint64_t frames_pushed = 0;
  std::uint64_t max_depth = 0;
  std::uint64_t edges_consumed = 0;
  std::vector<std::string> warnings;
};

struct FrameLimitExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every out-edge of every starting account, globally sorted by the priority
// key. Unknown starting accounts are skipped (optionally warned about).
inline std::vector<EdgeId> order_starting_edges(const TransactionGraph& g,
                                                const DetectionConfig& cfg,
                                                std::vector<std::string>* warnings = nullptr) {
  std::vector<EdgeId> out;
  std::vector<bool> seen_node(g.node_count(), false);
  for (const AccountId& account : cfg.starting_accounts) {
    NodeId n = g.find_node(account);
    if (n == kInvalidNode) {
      if (warnings) warnings->push_back("starting account not in graph: " + account.str());
      continue;
    }
    if (seen_node[n]) continue;
    seen_node[n] = true;
    auto adj = g.out_edges(n);
    out.insert(out.end(), adj.begin(), adj.end());
  }
  std::sort(out.begin(), out.end(),
            [&g](EdgeId a, EdgeId b) { return g.edge_priority_less(a, b); });
  return out;
}

namespace detail {

class CycleDetector {
 public:
  CycleDetector(const TransactionGraph& g, const DetectionConfig& cfg, DetectionStats* stats)
      : g_(g), cfg_(cfg), stats_(stats) {
    cfg_.validate();
    max_hops_ = cfg_.max_hops ? *cfg_.max_hops : std::numeric_limits<std::uint32_t>::max();
  }

  std::vector<TemporalCycle> run() {
    edge_state_.assign(g_.edge_count(), EdgeState::Unvisited);
    visited_.assign(g_.node_count(), false);
    DetectionStats local;
    DetectionStats& stats = stats_ ? *stats_ : local;
    std::vector<EdgeId> seeds = order_starting_edges(g_, cfg_, &stats.warnings);
    for (EdgeId seed : seeds) {
      if (edge_state_[seed] != EdgeState::Unvisited) continue;  // consumed earlier
      if (g_.edge(seed).value == 0) continue;                   // no money to trail
      ++stats.explorations;
      explore(start_bundle(seed), stats);
    }
    return std::move(cycles_);
  }

 private:
  struct Bundle {
    NodeId to = kInvalidNode;
    std::uint64_t min_block = 0;
    Wei total;
    std::vector<EdgeId> members;  // priority order; front has the minimum block
  };

  struct Frame {
    NodeId node = kInvalidNode;
    std::vector<Bundle> bundles;  // pending expansions, priority order
    std::size_t next = 0;
    Wei out_committed;
    bool any_commit = false;
  };

  // All not-yet-consumed parallel edges alongside the seed, any block; commit
  // pruning ejects members the realized continuation cannot carry.
  Bundle start_bundle(EdgeId seed) {
    NodeId from = g_.edge_from(seed);
    NodeId to = g_.edge_to(seed);
    Bundle b;
    b.to = to;
    for (EdgeId e : g_.out_edges(from)) {
      if (g_.edge_to(e) != to) continue;
      if (edge_state_[e] != EdgeState::Unvisited) continue;
      if (g_.edge(e).value == 0) continue;
      b.members.push_back(e);
      b.total += g_.edge(e).value;
    }
    b.min_block = g_.edge(b.members.front()).block_number;
    return b;
  }

  Bundle take_next(Frame& f) { return std::move(f.bundles[f.next++]); }

  void explore(Bundle start, DetectionStats& stats) {
    start_node_ = g_.edge_from(start.members.front());
    push_frame(std::move(start), stats);
    while (!frames_.empty()) {
      Frame& f = frames_.back();
      if (f.next >= f.bundles.size()) {
        pop_frame();
        continue;
      }
      // Money-trail guard: expansion requires committed < incoming.
      if (f.out_committed >= path_.back().total) {
        f.next = f.bundles.size();
        continue;
      }
      Bundle b = take_next(f);
      for (EdgeId e : b.members) {
        if (edge_state_[e] != EdgeState::Unvisited) {
          throw std::logic_error("internal invariant violated: pending bundle member not unvisited");
        }
      }
      std::uint32_t hops_with_b = static_cast<std::uint32_t>(path_.size()) + 1;
      if (b.to == start_node_) {
        if (hops_with_b > max_hops_) continue;
        Wei closing_total = commit(b, stats);
        Frame& back = frames_.back();
        back.out_committed += closing_total;
        back.any_commit = true;
        continue;
      }
      if (visited_[b.to]) continue;
      if (hops_with_b + 1 > max_hops_) continue;  // no room left to close
      if (frames_.size() + 1 > cfg_.max_frames) {
        throw FrameLimitExceeded(
            "path depth exceeded the frame cap (" + std::to_string(cfg_.max_frames) +
            "); raise CHAINTRAIL_MAX_FRAMES or set max_hops");
      }
      push_frame(std::move(b), stats);
    }
  }

  void push_frame(Bundle b, DetectionStats& stats) {
    for (EdgeId e : b.members) edge_state_[e] = EdgeState::PartiallyVisited;
    visited_[b.to] = true;
    Frame f;
    f.node = b.to;
    f.bundles = build_bundles(b.to, b.min_block);
    path_.push_back(std::move(b));
    frames_.push_back(std::move(f));
    ++stats.frames_pushed;
    stats.max_depth = std::max<std::uint64_t>(stats.max_depth, frames_.size());
  }

  void pop_frame() {
    Frame f = std::move(frames_.back());
    frames_.pop_back();
    Bundle in = std::move(path_.back());
    path_.pop_back();
    visited_[f.node] = false;
    if (!f.any_commit) {
      for (EdgeId e : in.members) edge_state_[e] = EdgeState::Unvisited;
      return;
    }
    for (EdgeId e : in.members) {
      if (edge_state_[e] != EdgeState::FinallyVisited) {
        throw std::logic_error("internal invariant violated: committed bundle member not finalized");
      }
    }
    if (!frames_.empty()) {
      frames_.back().out_committed += in.total;
      frames_.back().any_commit = true;
    }
  }

  // Out-bundles of `node` admissible after `anchor`, grouped by successor in
  // first-appearance (priority) order.
  std::vector<Bundle> build_bundles(NodeId node, std::uint64_t anchor) {
    std::vector<Bundle> bundles;
    std::unordered_map<NodeId, std::size_t> index;
    for (EdgeId e : g_.out_edges_after(node, anchor)) {
      if (edge_state_[e] != EdgeState::Unvisited) continue;
      const Transaction& tx = g_.edge(e);
      if (tx.value == 0) continue;
      NodeId to = g_.edge_to(e);
      auto [it, inserted] = index.try_emplace(to, bundles.size());
      if (inserted) {
        Bundle b;
        b.to = to;
        b.min_block = tx.block_number;
        bundles.push_back(std::move(b));
      }
      Bundle& b = bundles[it->second];
      b.members.push_back(e);
      b.total += tx.value;
    }
    return bundles;
  }

  // Commits the cycle formed by the current path plus `closing`. Prunes every
  // hop to members participating in at least one strictly block-increasing
  // selection, finalizes those, reverts never-consumed pruned path members,
  // and returns the closing hop's committed total.
  Wei commit(const Bundle& closing, DetectionStats& stats) {
    std::size_t hop_count = path_.size() + 1;
    // Backward sweep: a member survives iff its block precedes the maximum
    // surviving block of the next hop (every member of the last hop survives).
    // Forward reachability is structural: every member's block exceeds the
    // previous hop's minimum, and minima strictly increase hop to hop.
    std::vector<std::uint64_t> next_hop_max(hop_count, 0);
    auto hop_at = [&](std::size_t i) -> const Bundle& {
      return i < path_.size() ? path_[i] : closing;
    };
    auto survives = [&](std::size_t i, std::uint64_t block) {
      return i + 1 == hop_count || block < next_hop_max[i];
    };
    for (std::size_t i = hop_count; i-- > 0;) {
      const Bundle& hop = hop_at(i);
      bool have_best = false;
      std::uint64_t best = 0;
      for (EdgeId e : hop.members) {
        std::uint64_t block = g_.edge(e).block_number;
        if (survives(i, block) && (!have_best || block > best)) {
          best = block;
          have_best = true;
        }
      }
      if (!have_best) {
        throw std::logic_error("internal invariant violated: bundle lost its minimum member");
      }
      if (i > 0) next_hop_max[i - 1] = best;
    }

    TemporalCycle cycle;
    cycle.start = g_.account(start_node_);
    cycle.hops.reserve(hop_count);
    for (std::size_t i = 0; i < hop_count; ++i) {
      const Bundle& hop = hop_at(i);
      MergedEdge merged;
      merged.from = g_.account(g_.edge_from(hop.members.front()));
      merged.to = g_.account(hop.to);
      std::vector<EdgeId> ejected;
      for (EdgeId e : hop.members) {
        if (survives(i, g_.edge(e).block_number)) {
          merged.members.push_back(e);
        } else {
          ejected.push_back(e);
        }
      }
      std::sort(merged.members.begin(), merged.members.end(), [this](EdgeId a, EdgeId b) {
        std::uint64_t ba = g_.edge(a).block_number, bb = g_.edge(b).block_number;
        return ba != bb ? ba < bb : a < b;
      });
      for (EdgeId e : merged.members) {
        merged.block_numbers.push_back(g_.edge(e).block_number);
        merged.total_value += g_.edge(e).value;
        if (edge_state_[e] != EdgeState::FinallyVisited) ++stats.edges_consumed;
        edge_state_[e] = EdgeState::FinallyVisited;
      }
      // Pruned members never consumed by a cycle go back to the pool and
      // leave the live bundle, shrinking the frame's incoming value.
      if (i < path_.size()) {
        for (EdgeId e : ejected) {
          if (edge_state_[e] == EdgeState::PartiallyVisited) {
            edge_state_[e] = EdgeState::Unvisited;
            Bundle& live = path_[i];
            live.members.erase(std::find(live.members.begin(), live.members.end(), e));
            live.total -= g_.edge(e).value;
          }
        }
      }
      cycle.hops.push_back(std::move(merged));
    }
    cycle.hop_length = static_cast<std::uint32_t>(hop_count);
    cycle.start_block = cycle.hops.front().block_numbers.front();
    cycle.end_block = cycle.hops.back().block_numbers.back();
    cycle.out_value = cycle.hops.front().total_value;
    cycle.returned_value = cycle.hops.back().total_value;
    cycle.loss_percent = loss_percent(cycle.out_value, cycle.returned_value);
    if (cycle.end_block < cycle.start_block) {
      throw std::logic_error("internal invariant violated: cycle ends before it starts");
    }
    Wei closing_total = cycle.hops.back().total_value;
    cycles_.push_back(std::move(cycle));
    return closing_total;
  }

  const TransactionGraph& g_;
  DetectionConfig cfg_;
  DetectionStats* stats_;
  std::uint32_t max_hops_ = 0;
  NodeId start_node_ = kInvalidNode;
  std::vector<EdgeState> edge_state_;
  std::vector<bool> visited_;
  std::vector<Bundle> path_;
  std::vector<Frame> frames_;
  std::vector<TemporalCycle> cycles_;
};

}  // namespace detail

// Runs one full detection pass. Output order is commit order and is
// deterministic for a given graph and config.
inline std::vector<TemporalCycle> detect_cycles(const TransactionGraph& g,
                                                const DetectionConfig& cfg,
                                                DetectionStats* stats = nullptr) {
  return detail::CycleDetector(g, cfg, stats).run();
}

struct CycleExplanation {
  std::string path;
  std::string loss;
  std::uint64_t start_block = 0;
  std::uint64_t end_block = 0;
  std::uint32_t hop_length = 0;

  std::string render() const {
    return path + " | loss " + loss + " | blocks " + std::to_string(start_block) + ".." +
           std::to_string(end_block) + " | " + std::to_string(hop_length) + " hops";
  }
};

// Short rendering for logs and reports: nodes by their last four hex
// characters, hops as {block,...}:etherTotal with exact Wei-to-Ether
// conversion.
inline CycleExplanation explain_cycle(const TemporalCycle& c, const TransactionGraph&) {
  CycleExplanation out;
  std::string text = c.start.last4();
  for (const MergedEdge& hop : c.hops) {
    std::string blocks;
    for (std::size_t i = 0; i < hop.block_numbers.size(); ++i) {
      blocks += (i ? "," : "") + std::to_string(hop.block_numbers[i]);
    }
    text += " -{" + blocks + "}:" + wei_to_ether(hop.total_value) + "-> " + hop.to.last4();
  }
  out.path = std::move(text);
  out.loss = format_ratio_trim(c.loss_percent) + "%";
  out.start_block = c.start_block;
  out.end_block = c.end_block;
  out.hop_length = c.hop_length;
  return out;
}

}  // namespace chaintrail
