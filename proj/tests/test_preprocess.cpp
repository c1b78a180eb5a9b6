#include "chaintrail/preprocess.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace chaintrail;
using namespace testsupport;

namespace {

Wei total_value(std::span<const Transaction> txs) {
  Wei sum = 0;
  for (const Transaction& t : txs) sum += t.value;
  return sum;
}

}  // namespace

TEST_CASE("filter drops errored and zero-value transactions jointly") {
  Transaction zero = tx("a", "b", 1, 0);
  Transaction errored = tx("b", "c", 2, 5);
  errored.is_error = true;
  Transaction good = tx("c", "d", 3, 5);
  DetectionConfig cfg;
  auto out = filter_transactions(std::vector<Transaction>{zero, errored, good}, cfg);
  REQUIRE(out.size() == 1);
  CHECK(out[0].from == addr("c"));

  // all-clean input passes through unchanged
  std::vector<Transaction> clean{good, tx("d", "e", 4, 9)};
  CHECK(filter_transactions(clean, cfg).size() == 2);

  // zero-value retention is a config switch
  cfg.drop_zero_value = false;
  CHECK(filter_transactions(std::vector<Transaction>{zero}, cfg).size() == 1);

  // internal exclusion
  Transaction internal = tx("a", "b", 5, 3);
  internal.is_internal = true;
  DetectionConfig no_internal;
  no_internal.include_internal = false;
  CHECK(filter_transactions(std::vector<Transaction>{internal, good}, no_internal).size() == 1);
}

TEST_CASE("same-block same-pair transfers merge into one record") {
  Transaction first = tx("a", "b", 9272415, 3);
  first.gas = 21000;
  first.gas_used = 21000;
  first.gas_price = 10;
  Transaction second = tx("a", "b", 9272415, 4);
  second.gas = 21000;
  second.gas_used = 20000;
  second.gas_price = 25;
  auto merged = merge_same_block(std::vector<Transaction>{first, second});
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].value == 7);
  CHECK(merged[0].merged_count == 2);
  CHECK(merged[0].gas == 42000);
  CHECK(merged[0].gas_used == 41000);
  CHECK(merged[0].gas_price == 25);  // max keeps "pays more gas wins"
}

TEST_CASE("merge groups split by direction, block and transaction kind") {
  auto both_dirs = merge_same_block(std::vector<Transaction>{tx("a", "b", 10, 5), tx("b", "a", 10, 5)});
  CHECK(both_dirs.size() == 2);

  auto diff_block = merge_same_block(std::vector<Transaction>{tx("a", "b", 10, 5), tx("a", "b", 11, 5)});
  CHECK(diff_block.size() == 2);

  Transaction internal = tx("a", "b", 10, 5);
  internal.is_internal = true;
  auto mixed = merge_same_block(std::vector<Transaction>{tx("a", "b", 10, 5), internal});
  CHECK(mixed.size() == 2);  // internal and external stay distinct records
}

TEST_CASE("exact txHash duplicates drop once") {
  Transaction a = tx("a", "b", 1, 5);
  a.tx_hash = "0xsame";
  Transaction b = tx("c", "d", 2, 6);
  b.tx_hash = "0xsame";
  Transaction no_hash1 = tx("e", "f", 3, 7);
  Transaction no_hash2 = tx("e", "f", 3, 7);
  std::size_t dropped = 0;
  auto out = drop_duplicate_hashes(std::vector<Transaction>{a, b, no_hash1, no_hash2}, &dropped);
  CHECK(out.size() == 3);  // hashless records are never deduplicated
  CHECK(dropped == 1);
}

TEST_CASE("merge conserves value, is idempotent, never repeats a group key") {
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> node(0, 4);
  std::uniform_int_distribution<std::uint64_t> block(1, 6);
  std::uniform_int_distribution<std::uint64_t> value(0, 50);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Transaction> txs;
    std::uniform_int_distribution<int> len(0, 40);
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
      int from = node(rng), to = node(rng);
      if (from == to) continue;
      Transaction t = tx(std::string(1, static_cast<char>('a' + from)),
                         std::string(1, static_cast<char>('a' + to)), block(rng), value(rng));
      t.is_internal = (value(rng) % 2) == 0;
      txs.push_back(t);
    }
    auto merged = merge_same_block(txs);
    CHECK(total_value(merged) == total_value(txs));
    auto twice = merge_same_block(merged);
    REQUIRE(twice.size() == merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
      CHECK(twice[i].value == merged[i].value);
      CHECK(twice[i].merged_count == merged[i].merged_count);
    }
    std::set<std::tuple<std::uint64_t, std::string, std::string, bool>> keys;
    std::uint32_t constituents = 0;
    for (const Transaction& t : merged) {
      CHECK(keys.insert({t.block_number, t.from.str(), t.to.str(), t.is_internal}).second);
      constituents += t.merged_count;
    }
    CHECK(constituents == txs.size());
  }
}
