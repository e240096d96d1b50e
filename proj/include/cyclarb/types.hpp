#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cyclarb {

/// Arbitrary-precision signed integer used for raw token amounts, balance
/// deltas and wei quantities. Raw base units, never decimal-adjusted.
using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base error for everything this library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input file could not be opened (maps to CLI exit code 2).
class FileError : public Error {
 public:
  explicit FileError(const std::string& path)
      : Error("cannot open input file: " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// A line/field of an input file failed to parse or violated an invariant.
/// Message carries "<file>:<line>: field '<field>': <what>".
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Loaded data is semantically inconsistent (e.g. a reverted transaction
/// carrying swap events).
class DataError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Chains, statuses
// ---------------------------------------------------------------------------

enum class Chain : uint8_t { Ethereum, Arbitrum, Base, Optimism };

std::string_view to_string(Chain c);
Chain parse_chain(std::string_view s);
inline constexpr std::array<Chain, 4> kAllChains = {
    Chain::Ethereum, Chain::Arbitrum, Chain::Base, Chain::Optimism};

enum class TxStatus : uint8_t { Revert = 0, Success = 1 };

enum class CallType : uint8_t { Call, StaticCall, DelegateCall, CallCode, Create };

std::string_view to_string(CallType c);
CallType parse_call_type(std::string_view s);

// ---------------------------------------------------------------------------
// Identifiers
// ---------------------------------------------------------------------------

/// 20-byte address held in normalized form: "0x" + 40 lowercase hex chars.
/// A default-constructed Address is empty (used for contract creations,
/// where a transaction has no first callee).
class Address {
 public:
  Address() = default;
  static Address parse(std::string_view s);  // throws Error on bad input
  const std::string& hex() const { return hex_; }
  bool empty() const { return hex_.empty(); }
  auto operator<=>(const Address&) const = default;

 private:
  std::string hex_;
};

/// 32-byte transaction hash, normalized "0x" + 64 lowercase hex chars.
class TxHash {
 public:
  TxHash() = default;
  static TxHash parse(std::string_view s);
  const std::string& hex() const { return hex_; }
  bool empty() const { return hex_.empty(); }
  auto operator<=>(const TxHash&) const = default;

 private:
  std::string hex_;
};

// ---------------------------------------------------------------------------
// Time
// ---------------------------------------------------------------------------

/// UTC calendar day, stored as days since 1970-01-01.
class Date {
 public:
  Date() = default;
  explicit Date(int32_t days_since_epoch) : days_(days_since_epoch) {}
  static Date from_ymd(int year, unsigned month, unsigned day);
  static Date parse(std::string_view s);  // "YYYY-MM-DD"
  static Date from_timestamp(int64_t utc_seconds);

  int32_t days() const { return days_; }
  std::string to_string() const;  // "YYYY-MM-DD"
  Date next() const { return Date(days_ + 1); }
  auto operator<=>(const Date&) const = default;

 private:
  int32_t days_ = 0;
};

/// Parses an ISO-8601 UTC timestamp ("YYYY-MM-DDTHH:MM:SSZ", optional
/// fractional seconds, "Z" or "+00:00" suffix, ' ' accepted for 'T').
/// Returns epoch seconds. Non-UTC offsets are rejected.
int64_t parse_iso8601_utc(std::string_view s);

/// Canonical serialization of epoch seconds: "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601_utc(int64_t utc_seconds);

// ---------------------------------------------------------------------------
// Hex helpers
// ---------------------------------------------------------------------------

/// Decodes a "0x"-prefixed hex string ("0x" alone gives an empty vector).
/// Odd-length or non-hex input throws Error.
std::vector<uint8_t> parse_hex_bytes(std::string_view s);

/// Encodes bytes as lowercase "0x"-prefixed hex.
std::string to_hex(const std::vector<uint8_t>& bytes);

// ---------------------------------------------------------------------------
// Domain records
// ---------------------------------------------------------------------------

/// One DEX swap log. Amounts are raw token base units and strictly positive;
/// token_sold != token_bought; evt_index is the log position within the tx
/// and is unique per tx.
struct SwapEvent {
  TxHash tx_hash;
  Address token_sold;
  Address token_bought;
  BigInt amount_sold;
  BigInt amount_bought;
  uint32_t evt_index = 0;

  bool operator==(const SwapEvent&) const = default;
};

struct TransactionRecord {
  TxHash hash;
  Address from_addr;
  std::optional<Address> to_addr;  // empty for contract creations
  uint64_t block_number = 0;
  int64_t timestamp = 0;  // UTC epoch seconds
  uint64_t gas_used = 0;
  BigInt gas_price;  // wei per gas, semantics pre-resolved by the export
  std::vector<uint8_t> calldata;
  TxStatus status = TxStatus::Success;
  Chain chain = Chain::Ethereum;

  bool operator==(const TransactionRecord&) const = default;
};

/// One entry of a transaction's call trace, in trace order.
struct TraceCall {
  TxHash tx_hash;
  CallType call_type = CallType::Call;
  Address callee;
  std::vector<uint8_t> selector;  // first <=4 bytes of input, may be empty
  uint32_t depth_order = 0;

  bool operator==(const TraceCall&) const = default;
};

/// Curated address labels for one chain. Sets may overlap; precedence is
/// resolved by the consumers (the detector unions routers+aggregators, the
/// classifier uses dex_pools only).
struct LabelSet {
  std::set<Address> routers;
  std::set<Address> aggregators;
  std::set<Address> dex_pools;
  std::map<Address, std::string> exclusion_labels;

  bool operator==(const LabelSet&) const = default;
};

/// Daily OHLC bar (US$). Invariants: low > 0, low <= min(open, close),
/// high >= max(open, close).
struct OhlcBar {
  Date date;
  double open = 0;
  double high = 0;
  double low = 0;
  double close = 0;

  bool operator==(const OhlcBar&) const = default;
};

struct ContractBytecode {
  Address address;
  std::vector<uint8_t> code;  // empty for self-destructed contracts

  bool operator==(const ContractBytecode&) const = default;
};

/// Swap events grouped by transaction, sorted ascending by evt_index.
using SwapsByTx = std::map<TxHash, std::vector<SwapEvent>>;
/// Trace calls grouped by transaction, sorted ascending by depth_order.
using TracesByTx = std::map<TxHash, std::vector<TraceCall>>;

}  // namespace cyclarb
