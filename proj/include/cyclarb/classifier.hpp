#pragma once

#include "cyclarb/types.hpp"

namespace cyclarb {

enum class Purpose : uint8_t { CyclicArb, Other };
enum class Involvement : uint8_t { Trade, Interaction, Residual };
enum class Outcome : uint8_t { Success, Revert };

std::string_view to_string(Purpose p);
std::string_view to_string(Involvement i);
std::string_view to_string(Outcome o);
Purpose parse_purpose(std::string_view s);
Involvement parse_involvement(std::string_view s);
Outcome parse_outcome(std::string_view s);

/// The per-transaction classification triple. Trade implies Success: a
/// reverted transaction cannot have emitted swap logs.
struct ClassifiedTx {
  TxHash hash;
  Purpose purpose = Purpose::Other;
  Involvement involvement = Involvement::Residual;
  Outcome outcome = Outcome::Success;

  bool operator==(const ClassifiedTx&) const = default;
};

/// CyclicArb iff the first callee is a validated bot contract. Contract
/// creations (no first callee) are Other.
Purpose classify_purpose(const TransactionRecord& tx, const std::set<Address>& bots);

/// Trade iff the transaction emits at least one swap event (swap presence
/// takes precedence over pool probes); else Interaction iff any trace call
/// targets a pool address; else Residual. A swap-less transaction without
/// trace data is Residual.
Involvement classify_involvement(const TransactionRecord& tx, const SwapsByTx& swaps,
                                 const TracesByTx& traces, const std::set<Address>& pools);

Outcome classify_outcome(const TransactionRecord& tx);

struct ClassifyStats {
  uint64_t missing_trace_residuals = 0;  // swap-less txs with no trace data
};

/// Classifies every transaction, in input order. Throws DataError naming
/// the transaction if a reverted transaction carries swap events.
std::vector<ClassifiedTx> classify_all(const std::vector<TransactionRecord>& txs,
                                       const SwapsByTx& swaps, const TracesByTx& traces,
                                       const std::set<Address>& pools,
                                       const std::set<Address>& bots,
                                       ClassifyStats* stats = nullptr);

}  // namespace cyclarb
