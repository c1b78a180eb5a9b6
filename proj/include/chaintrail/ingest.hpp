/*
  ingest.hpp: parsers for exported transaction dumps.

  Three sources: block-explorer style JSON for external and internal
  transaction lists (either a bare array of objects or the usual
  {"status","message","result":[...]} envelope), a plain CSV edge format for
  fixtures, and a tagged-accounts CSV. All numeric fields arrive as decimal
  strings and are parsed exactly; 64-bit integers cannot hold Wei values.

  Status-flag polarity: the export schemas disagree in the wild, so a record
  counts as failed iff isError == "1" or txreceipt_status == "0". timeStamp is
  retained as metadata but never used for ordering.
*/
#pragma once

#include "chaintrail/types.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace chaintrail {

struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat string-keyed view of one source record.
using RawTxRecord = std::map<std::string, std::string>;

namespace detail {

inline const std::string* find_field(const RawTxRecord& rec, const std::string& key) {
  auto it = rec.find(key);
  if (it == rec.end() || it->second.empty()) return nullptr;
  return &it->second;
}

inline const std::string& require_field(const RawTxRecord& rec, const std::string& key) {
  const std::string* v = find_field(rec, key);
  if (!v) throw IngestError("missing mandatory field: " + key);
  return *v;
}

inline bool parse_bool_flag(const std::string& s, const std::string& what) {
  if (s == "1" || s == "true" || s == "True" || s == "TRUE") return true;
  if (s == "0" || s == "false" || s == "False" || s == "FALSE") return false;
  throw IngestError(what + ": not a boolean: '" + s + "'");
}

inline Wei field_wei(const RawTxRecord& rec, const std::string& key) {
  try {
    return parse_wei(require_field(rec, key), key);
  } catch (const std::invalid_argument& e) {
    throw IngestError(e.what());
  }
}

inline std::uint64_t field_u64(const RawTxRecord& rec, const std::string& key,
                               std::uint64_t fallback, bool required) {
  const std::string* v = find_field(rec, key);
  if (!v) {
    if (required) throw IngestError("missing mandatory field: " + key);
    return fallback;
  }
  try {
    return parse_u64(*v, key);
  } catch (const std::invalid_argument& e) {
    throw IngestError(e.what());
  }
}

// Resolves the receiving address; empty "to" with a contractAddress is a
// contract creation and the funds flow to the created contract.
inline void resolve_to(const RawTxRecord& rec, Transaction& tx) {
  const std::string* to = find_field(rec, "to");
  if (to) {
    tx.to = AccountId::parse(*to);
    return;
  }
  const std::string* created = find_field(rec, "contractAddress");
  if (!created) throw IngestError("missing mandatory field: to");
  tx.to = AccountId::parse(*created);
  tx.creates_contract = true;
}

inline bool error_flag(const RawTxRecord& rec) {
  const std::string* is_error = find_field(rec, "isError");
  if (is_error && *is_error == "1") return true;
  const std::string* receipt = find_field(rec, "txreceipt_status");
  if (receipt && *receipt == "0") return true;
  return false;
}

}  // namespace detail

inline Transaction parse_external_transaction(const RawTxRecord& rec) {
  Transaction tx;
  try {
    tx.from = AccountId::parse(detail::require_field(rec, "from"));
    detail::resolve_to(rec, tx);
  } catch (const std::invalid_argument& e) {
    throw IngestError(e.what());
  }
  tx.block_number = detail::field_u64(rec, "blockNumber", 0, true);
  tx.value = detail::field_wei(rec, "value");
  tx.gas = detail::field_u64(rec, "gas", 0, false);
  tx.gas_used = detail::field_u64(rec, "gasUsed", 0, false);
  tx.gas_price = detail::field_wei(rec, "gasPrice");
  tx.time_stamp = detail::field_u64(rec, "timeStamp", 0, false);
  tx.is_internal = false;
  tx.is_error = detail::error_flag(rec);
  if (const std::string* h = detail::find_field(rec, "hash")) tx.tx_hash = *h;
  return tx;
}

// Internal records carry no gas price; absent means 0.
inline Transaction parse_internal_transaction(const RawTxRecord& rec) {
  Transaction tx;
  try {
    tx.from = AccountId::parse(detail::require_field(rec, "from"));
    detail::resolve_to(rec, tx);
  } catch (const std::invalid_argument& e) {
    throw IngestError(e.what());
  }
  tx.block_number = detail::field_u64(rec, "blockNumber", 0, true);
  tx.value = detail::field_wei(rec, "value");
  tx.gas = detail::field_u64(rec, "gas", 0, false);
  tx.gas_used = detail::field_u64(rec, "gasUsed", 0, false);
  if (detail::find_field(rec, "gasPrice")) {
    tx.gas_price = detail::field_wei(rec, "gasPrice");
  }
  tx.time_stamp = detail::field_u64(rec, "timeStamp", 0, false);
  tx.is_internal = true;
  detail::require_field(rec, "isError");
  tx.is_error = detail::error_flag(rec);
  if (const std::string* h = detail::find_field(rec, "hash")) tx.tx_hash = *h;
  return tx;
}

namespace detail {

inline RawTxRecord record_from_json(const nlohmann::json& obj) {
  if (!obj.is_object()) throw IngestError("transaction record is not a JSON object");
  RawTxRecord rec;
  for (const auto& [key, val] : obj.items()) {
    if (val.is_string()) rec[key] = val.get<std::string>();
    else if (val.is_null()) rec[key] = "";
    else rec[key] = val.dump();
  }
  return rec;
}

inline const nlohmann::json& record_array(const nlohmann::json& doc) {
  if (doc.is_array()) return doc;
  if (doc.is_object() && doc.contains("result") && doc["result"].is_array()) {
    return doc["result"];
  }
  throw IngestError("expected a JSON array of transactions (or an object with a 'result' array)");
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(path + ": " + e.what());
  }
  return doc;
}

template <typename ParseFn>
std::vector<Transaction> load_tx_json(const std::string& path, ParseFn parse) {
  nlohmann::json doc = load_json_file(path);
  const nlohmann::json& arr = record_array(doc);
  std::vector<Transaction> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    try {
      out.push_back(parse(record_from_json(arr[i])));
    } catch (const IngestError& e) {
      throw IngestError(path + ": record " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace detail

inline std::vector<Transaction> load_external_json(const std::string& path) {
  return detail::load_tx_json(path, [](const RawTxRecord& r) { return parse_external_transaction(r); });
}

inline std::vector<Transaction> load_internal_json(const std::string& path) {
  return detail::load_tx_json(path, [](const RawTxRecord& r) { return parse_internal_transaction(r); });
}

// Tagged-accounts CSV: header "address,label", one record per (address, label)
// pair; duplicates collapse, an address may carry several labels.
inline std::vector<AccountTag> load_tagged_accounts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IngestError(path + ": empty file, header expected");
  auto header = detail::split_csv_line(line);
  if (header.size() != 2 || header[0] != "address" || header[1] != "label") {
    throw IngestError(path + ": expected header 'address,label'");
  }
  std::vector<AccountTag> out;
  std::set<AccountTag> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = detail::split_csv_line(line);
    if (fields.size() != 2) {
      throw IngestError(path + ": line " + std::to_string(line_no) + ": expected 2 fields");
    }
    AccountTag tag;
    try {
      tag.address = AccountId::parse(fields[0]);
    } catch (const std::invalid_argument& e) {
      throw IngestError(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    tag.label = fields[1];
    if (seen.insert(tag).second) out.push_back(std::move(tag));
  }
  return out;
}

inline constexpr const char* kEdgeCsvHeader =
    "from,to,blockNumber,value,gas,gasUsed,gasPrice,isInternal,isError";

struct CsvIssue {
  std::size_t line = 0;
  std::string message;
};

// Plain CSV edge format, one Transaction per row, same parsing rules as the
// JSON paths. With `issues == nullptr` the loader fails fast on the first bad
// row; otherwise bad rows are collected and skipped.
inline std::vector<Transaction> load_csv_edges(const std::string& path,
                                               std::vector<CsvIssue>* issues = nullptr) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IngestError(path + ": empty file, header expected");
  {
    auto header = detail::split_csv_line(line);
    std::ostringstream joined;
    for (std::size_t i = 0; i < header.size(); ++i) joined << (i ? "," : "") << header[i];
    if (joined.str() != kEdgeCsvHeader) {
      throw IngestError(path + ": expected header '" + std::string(kEdgeCsvHeader) + "'");
    }
  }
  std::vector<Transaction> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = detail::split_csv_line(line);
    try {
      if (fields.size() != 9) throw IngestError("expected 9 fields");
      Transaction tx;
      tx.from = AccountId::parse(fields[0]);
      tx.to = AccountId::parse(fields[1]);
      tx.block_number = parse_u64(fields[2], "blockNumber");
      tx.value = parse_wei(fields[3], "value");
      tx.gas = parse_u64(fields[4], "gas");
      tx.gas_used = parse_u64(fields[5], "gasUsed");
      tx.gas_price = parse_wei(fields[6], "gasPrice");
      tx.is_internal = detail::parse_bool_flag(fields[7], "isInternal");
      tx.is_error = detail::parse_bool_flag(fields[8], "isError");
      out.push_back(std::move(tx));
    } catch (const std::exception& e) {
      if (issues) {
        issues->push_back({line_no, e.what()});
      } else {
        throw IngestError(path + ": line " + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  return out;
}

inline std::string transaction_to_csv_row(const Transaction& tx) {
  std::ostringstream row;
  row << tx.from.str() << ',' << tx.to.str() << ',' << tx.block_number << ','
      << to_decimal_string(tx.value) << ',' << tx.gas << ',' << tx.gas_used << ','
      << to_decimal_string(tx.gas_price) << ',' << (tx.is_internal ? "true" : "false") << ','
      << (tx.is_error ? "true" : "false");
  return row.str();
}

// Round-trip view of the numeric fields as the source format's decimal
// strings; parse is lossless for in-scope fields.
inline RawTxRecord serialize_transaction(const Transaction& tx) {
  RawTxRecord rec;
  rec["from"] = tx.from.str();
  rec["to"] = tx.to.str();
  rec["blockNumber"] = std::to_string(tx.block_number);
  rec["value"] = to_decimal_string(tx.value);
  rec["gas"] = std::to_string(tx.gas);
  rec["gasUsed"] = std::to_string(tx.gas_used);
  rec["gasPrice"] = to_decimal_string(tx.gas_price);
  rec["timeStamp"] = std::to_string(tx.time_stamp);
  rec["isError"] = tx.is_error ? "1" : "0";
  if (!tx.tx_hash.empty()) rec["hash"] = tx.tx_hash;
  return rec;
}

}  // namespace chaintrail
