#pragma once

#include "cyclarb/types.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace cyclarb {

// Loaders for the documented chain-data export formats. All loaders validate
// per-record invariants eagerly and throw ParseError with file, line number
// and field name on the first violation. Loaded collections are immutable
// value types and safe to share across threads.
//
// Formats (one JSON object per line for *.jsonl; CSV with header otherwise):
//   transactions.jsonl  hash, from, to, block_number, block_time (ISO-8601),
//                       gas_used, gas_price (decimal string, wei),
//                       calldata (0x-hex), status (0|1), chain
//   swaps.jsonl         tx_hash, evt_index, token_sold, token_bought,
//                       amount_sold, amount_bought (decimal strings)
//   traces.jsonl        tx_hash, order, call_type, to, input_selector
//   labels.csv          address, kind in {router, aggregator, pool, exclude}, note
//   ohlc.csv            date, open, high, low, close
//   bytecode.jsonl      address, code (0x-hex)

/// Streams transaction records to `sink` in file order. Duplicate hashes
/// raise ParseError naming both line numbers. Every record is stamped with
/// `chain`; a "chain" field present in the file must agree.
void for_each_transaction(const std::string& path, Chain chain,
                          const std::function<void(TransactionRecord&&)>& sink);

std::vector<TransactionRecord> load_transactions(const std::string& path, Chain chain);

/// Groups swap events by tx_hash, sorted by evt_index within each group.
SwapsByTx load_swaps(const std::string& path);

/// Groups trace calls by tx_hash, sorted by depth_order within each group.
TracesByTx load_traces(const std::string& path);

LabelSet load_labels(const std::string& path);

std::vector<OhlcBar> load_ohlc(const std::string& path);

std::vector<ContractBytecode> load_bytecode(const std::string& path);

// Canonical serializers. Re-loading a saved collection yields an identical
// collection, and saving it again yields identical bytes (grouped outputs
// are emitted in key order, floating-point fields in shortest round-trip
// form).

void save_transactions(std::ostream& out, const std::vector<TransactionRecord>& txs);
void save_swaps(std::ostream& out, const SwapsByTx& swaps);
void save_traces(std::ostream& out, const TracesByTx& traces);
void save_labels(std::ostream& out, const LabelSet& labels);
void save_ohlc(std::ostream& out, const std::vector<OhlcBar>& bars);
void save_bytecode(std::ostream& out, const std::vector<ContractBytecode>& codes);

/// Shortest decimal form of `v` that parses back to the same double.
std::string format_double(double v);

/// Parses a non-negative decimal-string integer (arbitrary precision).
BigInt parse_biguint(std::string_view s, std::string_view what);

}  // namespace cyclarb
