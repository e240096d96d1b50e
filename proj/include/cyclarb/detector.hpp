#pragma once

#include "cyclarb/types.hpp"

#include <cstddef>
#include <span>

namespace cyclarb {

/// The token conversion path of one trade: for swaps ordered by evt_index,
/// the flattened sequence <sold_1, bought_1, ..., sold_k, bought_k>.
/// Always of even length 2k, k >= 1.
struct TokenPath {
  std::vector<Address> tokens;

  bool operator==(const TokenPath&) const = default;
};

/// Net balance change per token from the initiator's perspective, over one
/// trade: delta[token] = sum(bought amounts) - sum(sold amounts). Every
/// token appearing in the trade has an entry; zero entries are retained.
struct BalanceDelta {
  std::map<Address, BigInt> deltas;

  bool operator==(const BalanceDelta&) const = default;
};

/// Derives (path, delta) from one trade's swap events. The events are
/// sorted ascending by evt_index first, so input order never matters.
/// Throws Error on an empty trade.
std::pair<TokenPath, BalanceDelta> extract_features(std::vector<SwapEvent> trade);

/// True iff the path forms a closed, continuous cycle: the first token sold
/// equals the last token bought, and the token bought in swap j equals the
/// token sold in swap j+1 for every adjacent pair. Single-swap paths are
/// never cyclic because a swap's sold and bought tokens always differ.
bool is_cyclic(const TokenPath& path);

/// True iff no token lost value and at least one strictly gained.
/// `dust_epsilon` relaxes the non-negativity bound to delta >= -epsilon
/// (default 0: exact integer comparison); the strict-gain test stays > 0.
bool is_profitable(const BalanceDelta& delta, const BigInt& dust_epsilon = BigInt(0));

/// Drops every transaction whose first callee is a labeled router or
/// aggregator. Returns the survivors in input order.
std::vector<const TransactionRecord*> filter_router_aggregator(
    std::span<const TransactionRecord> txs, const LabelSet& labels);

/// Sizes of the trade set after each sequential filter. Monotone
/// non-increasing: with_swaps >= after_router_filter >= after_cyclic >=
/// after_profit.
struct FilterCounts {
  uint64_t with_swaps = 0;
  uint64_t after_router_filter = 0;
  uint64_t after_cyclic = 0;
  uint64_t after_profit = 0;
};

struct DetectorConfig {
  BigInt dust_epsilon = BigInt(0);
  size_t evidence_cap = 100;  // retained evidence entries per contract
};

struct Evidence {
  TxHash tx_hash;
  TokenPath path;
  BalanceDelta delta;
};

struct CandidateEvidence {
  std::vector<Evidence> samples;  // sorted by tx_hash, truncated to the cap
  uint64_t total = 0;             // surviving transactions, pre-cap
  uint64_t first_seen_block = 0;
};

/// Contracts whose transactions survived all three filters, with the
/// surviving transactions as evidence.
struct CandidateSet {
  std::map<Address, CandidateEvidence> contracts;
  FilterCounts counts;
};

/// Runs the full chain: take every transaction with at least one swap
/// event, drop router/aggregator first callees, keep cyclic paths, keep
/// profitable deltas, and collect the first callees of the survivors.
/// Deterministic for fixed inputs and invariant under permutation of the
/// input record order.
CandidateSet detect_candidates(const std::vector<TransactionRecord>& txs,
                               const SwapsByTx& swaps, const LabelSet& labels,
                               const DetectorConfig& config = {});

}  // namespace cyclarb
