/*
  types.hpp: domain vocabulary shared by every module.

  AccountId is a normalized 0x-prefixed 40-hex-char address (lowercase at
  construction, so comparison is plain string equality). Transaction is one
  directed, timestamped value transfer; block number is the sole clock.
*/
#pragma once

#include "chaintrail/wei.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chaintrail {

class AccountId {
 public:
  AccountId() = default;

  // Accepts 0x-prefixed or bare 40-hex-char strings, any case.
  static AccountId parse(std::string_view s) {
    std::string_view body = s;
    if (body.size() >= 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) {
      body.remove_prefix(2);
    }
    if (body.size() != 40) {
      throw std::invalid_argument("address must be 40 hex characters: '" + std::string(s) + "'");
    }
    std::string norm = "0x";
    norm.reserve(42);
    for (char c : body) {
      if (c >= '0' && c <= '9') norm.push_back(c);
      else if (c >= 'a' && c <= 'f') norm.push_back(c);
      else if (c >= 'A' && c <= 'F') norm.push_back(static_cast<char>(c - 'A' + 'a'));
      else throw std::invalid_argument("address has non-hex character: '" + std::string(s) + "'");
    }
    AccountId id;
    id.value_ = std::move(norm);
    return id;
  }

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  // Short display label: last four hex characters.
  std::string last4() const { return value_.size() == 42 ? value_.substr(38) : value_; }

  friend bool operator==(const AccountId&, const AccountId&) = default;
  friend auto operator<=>(const AccountId&, const AccountId&) = default;

 private:
  std::string value_;
};

enum class AccountKind : std::uint8_t { Eoa, Sc, Unknown };

inline std::string_view to_string(AccountKind k) {
  switch (k) {
    case AccountKind::Eoa: return "EOA";
    case AccountKind::Sc: return "SC";
    default: return "Unknown";
  }
}

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
inline constexpr NodeId kInvalidNode = static_cast<NodeId>(-1);

struct Transaction {
  AccountId from;
  AccountId to;
  std::uint64_t block_number = 0;  // timestamp proxy, the only ordering clock
  Wei value;                       // Wei, exact
  std::uint64_t gas = 0;
  std::uint64_t gas_used = 0;
  Wei gas_price;                   // smallest native unit per gas unit
  bool is_internal = false;
  bool is_error = false;
  std::string tx_hash;             // optional, empty when the source has none
  std::uint32_t merged_count = 1;  // >1 when same-block merging folded records
  std::uint64_t time_stamp = 0;    // retained metadata, never used for ordering
  bool creates_contract = false;   // to == created contract address
};

struct AccountTag {
  AccountId address;
  std::string label;

  friend bool operator==(const AccountTag&, const AccountTag&) = default;
  friend auto operator<=>(const AccountTag&, const AccountTag&) = default;
};

// Run parameters the detection pipeline threads through every stage.
struct DetectionConfig {
  std::optional<Ratio> max_loss_percent;  // alpha; applied by analytics
  std::optional<std::uint32_t> max_hops;  // >= 2 when set
  bool include_internal = true;
  bool drop_zero_value = true;
  std::vector<AccountId> starting_accounts;
  std::uint64_t max_frames = 10'000;  // path-depth hard cap when max_hops unset

  void validate() const {
    if (max_hops && *max_hops < 2) {
      throw std::invalid_argument("max_hops must be >= 2; a temporal cycle needs two hops");
    }
    if (max_frames == 0) {
      throw std::invalid_argument("max_frames must be positive");
    }
  }
};

}  // namespace chaintrail

template <>
struct std::hash<chaintrail::AccountId> {
  std::size_t operator()(const chaintrail::AccountId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
