#include "chaintrail/graph.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace chaintrail;
using namespace testsupport;

TEST_CASE("AccountId normalizes case and validates shape") {
  AccountId a = AccountId::parse("0x00000000000000000000000000000000000000AB");
  AccountId b = AccountId::parse("0x00000000000000000000000000000000000000ab");
  CHECK(a == b);
  CHECK(a.str() == "0x00000000000000000000000000000000000000ab");
  CHECK(a.last4() == "00ab");
  CHECK(AccountId::parse("00000000000000000000000000000000000000ab") == a);  // bare form
  CHECK_THROWS_AS(AccountId::parse("0x123"), std::invalid_argument);
  CHECK_THROWS_AS(AccountId::parse("0x00000000000000000000000000000000000000zz"),
                  std::invalid_argument);
}

TEST_CASE("build_graph on the 10-edge fixture") {
  auto txs = table1_transactions();
  auto tags = table1_tags();
  TransactionGraph g = build_graph(txs, tags);
  CHECK(g.node_count() == 5);
  CHECK(g.edge_count() == 10);
  CHECK(g.tags_of(g.find_node(addr("a"))).count("Tagged") == 1);
  CHECK(g.tags_of(g.find_node(addr("b"))).empty());
  CHECK(g.build_report().self_loops_skipped == 0);
}

TEST_CASE("build_graph skips the empty and degenerate cases") {
  TransactionGraph empty = build_graph({}, {});
  CHECK(empty.node_count() == 0);
  CHECK(empty.edge_count() == 0);
  CHECK(empty.contact_sequence().empty());

  // self-loops are rejected at build and counted
  std::vector<Transaction> txs{tx("a", "a", 3, 10), tx("a", "b", 4, 5)};
  TransactionGraph g = build_graph(txs, {});
  CHECK(g.edge_count() == 1);
  CHECK(g.build_report().self_loops_skipped == 1);
  CHECK(g.build_report().self_loop_indices == std::vector<std::size_t>{0});

  // a tagged account with no transactions still becomes a node
  std::vector<AccountTag> tags{{addr("ff"), "Phishing"}};
  TransactionGraph tagged = build_graph(txs, tags);
  CHECK(tagged.find_node(addr("ff")) != kInvalidNode);
  CHECK(tagged.build_report().tagged_nodes_without_edges == 1);
  CHECK(tagged.out_edges_after(addr("ff"), 0).empty());

  // contract creations mark the created account as a contract
  Transaction creation = tx("a", "cc", 5, 1);
  creation.creates_contract = true;
  std::vector<Transaction> with_creation{creation};
  TransactionGraph gc = build_graph(with_creation, {});
  CHECK(gc.kind(gc.find_node(addr("cc"))) == AccountKind::Sc);
  CHECK(gc.kind(gc.find_node(addr("a"))) == AccountKind::Unknown);
}

TEST_CASE("adjacency follows the priority key") {
  // same pair, later block first in input: earlier block must sort first
  std::vector<Transaction> txs{tx("a", "b", 5, 10), tx("a", "b", 3, 10)};
  TransactionGraph g = build_graph(txs, {});
  auto adj = g.out_edges(g.find_node(addr("a")));
  CHECK(g.edge(adj[0]).block_number == 3);
  CHECK(g.edge(adj[1]).block_number == 5);

  // same block: higher value first
  std::vector<Transaction> same_block{tx("a", "b", 5, 7), tx("a", "c", 5, 9)};
  TransactionGraph g2 = build_graph(same_block, {});
  auto adj2 = g2.out_edges(g2.find_node(addr("a")));
  CHECK(g2.edge(adj2[0]).value == 9);

  // same block and value: higher gas price first
  std::vector<Transaction> same_value{tx("a", "b", 5, 7, 10), tx("a", "c", 5, 7, 20)};
  TransactionGraph g3 = build_graph(same_value, {});
  auto adj3 = g3.out_edges(g3.find_node(addr("a")));
  CHECK(g3.edge(adj3[0]).gas_price == 20);
}

TEST_CASE("out_edges_after returns the strict suffix in priority order") {
  auto txs = table1_transactions();
  TransactionGraph g = build_graph(txs, {});
  auto after_t1 = g.out_edges_after(addr("c"), 1);
  REQUIRE(after_t1.size() == 3);
  CHECK(g.edge(after_t1[0]).block_number == 4);
  CHECK(g.edge(after_t1[1]).block_number == 6);
  CHECK(g.edge(after_t1[2]).block_number == 7);
  CHECK(g.edge(after_t1[2]).to == addr("b"));

  CHECK(g.out_edges_after(addr("b"), 9).empty());   // no later edges
  CHECK(g.out_edges_after(addr("99"), 0).empty());  // unknown node, not an error

  // boundary is strict
  CHECK(g.out_edges_after(addr("c"), 4).size() == 2);
  CHECK(g.out_edges_after(addr("c"), 3).size() == 3);
}

TEST_CASE("contact_sequence is the globally ordered edge table") {
  auto txs = table1_transactions();
  TransactionGraph g = build_graph(txs, {});
  auto events = g.contact_sequence();
  REQUIRE(events.size() == 10);
  CHECK(events.front().from == addr("a"));
  CHECK(events.front().block_number == 1);
  CHECK(events.front().value == 100);
  CHECK(events.back().from == addr("b"));
  CHECK(events.back().block_number == 9);

  std::vector<Transaction> single{tx("a", "b", 2, 5)};
  TransactionGraph g1 = build_graph(single, {});
  auto one = g1.contact_sequence();
  REQUIRE(one.size() == 1);
  CHECK(one[0].to == addr("b"));
}

TEST_CASE("graph properties hold on random inputs") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    RandomCase rc = random_case(rng);
    TransactionGraph g = build_graph(rc.transactions, rc.tags);

    // contact sequence: permutation of the edge table, non-decreasing blocks
    auto events = g.contact_sequence();
    CHECK(events.size() == g.edge_count());
    std::set<EdgeId> seen;
    for (std::size_t i = 0; i < events.size(); ++i) {
      CHECK(seen.insert(events[i].edge).second);
      if (i > 0) CHECK(events[i - 1].block_number <= events[i].block_number);
    }

    // suffix property: a later anchor yields an order-preserving subsequence
    std::uniform_int_distribution<std::uint64_t> block_dist(0, 13);
    std::uint64_t b1 = block_dist(rng), b2 = block_dist(rng);
    if (b1 > b2) std::swap(b1, b2);
    for (NodeId n = 0; n < g.node_count(); ++n) {
      auto earlier = g.out_edges_after(n, b1);
      auto later = g.out_edges_after(n, b2);
      CHECK(later.size() <= earlier.size());
      // later is exactly the tail of earlier
      CHECK(std::equal(later.begin(), later.end(), earlier.end() - later.size()));
    }

    // rebuild determinism: identical EdgeId assignment and adjacency
    TransactionGraph g2 = build_graph(rc.transactions, rc.tags);
    CHECK(g2.edge_count() == g.edge_count());
    for (NodeId n = 0; n < g.node_count(); ++n) {
      auto a1 = g.out_edges(n);
      auto a2 = g2.out_edges(n);
      CHECK(std::equal(a1.begin(), a1.end(), a2.begin(), a2.end()));
    }
  }
}
