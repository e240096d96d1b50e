#pragma once

#include "cyclarb/classifier.hpp"
#include "cyclarb/types.hpp"

#include <iosfwd>

namespace cyclarb {

/// Key for one (purpose, involvement, outcome) cell, e.g.
/// "cyclicArb-trade-success". Ten of the twelve combinations are reachable
/// (trade-revert is impossible).
std::string category_key(Purpose p, Involvement i, Outcome o);

/// The ten reachable triple keys, in fixed emission order.
const std::vector<std::string>& reachable_categories();

/// Integer-exact accumulator for one category on one day.
struct CategoryAgg {
  uint64_t tx_count = 0;
  uint64_t gas_used = 0;
  BigInt fees_wei;                 // sum of gas_used * gas_price
  BigInt gas_price_sum;            // for the unweighted mean
  std::vector<BigInt> gas_prices;  // per-tx, sorted after merge

  void add_tx(const TransactionRecord& tx);
  void merge(CategoryAgg&& other);

  /// Nearest-rank median of per-transaction gas prices (wei).
  BigInt median_gas_price() const;
  /// Unweighted mean gas price across transactions (wei).
  double mean_gas_price() const;
  /// Fee-weighted average price per gas unit: fees / gas (wei).
  double avg_price_per_gas() const;
};

/// Per-(chain, day) aggregates: one entry per reachable triple plus the
/// rollups "cyclicArb", "other" and "total". Category gas/fee/count sums
/// equal the day's totals exactly.
struct DailyAggregate {
  Chain chain = Chain::Ethereum;
  Date date;
  std::map<std::string, CategoryAgg> categories;
};

/// Aggregates classified transactions per (chain, day). `classified` must
/// be index-aligned with `txs` (as produced by classify_all). The work is
/// partitioned across `workers` threads and merged with exact integer
/// arithmetic, so results are independent of the worker count.
std::vector<DailyAggregate> aggregate_daily(const std::vector<ClassifiedTx>& classified,
                                            const std::vector<TransactionRecord>& txs,
                                            unsigned workers = 1);

/// Merges independently computed partial aggregates (exposed separately so
/// partition invariance is testable).
std::vector<DailyAggregate> merge_daily(std::vector<std::vector<DailyAggregate>> parts);

/// Extracts the per-day gas series of one category on one chain.
std::vector<std::pair<Date, double>> daily_gas_series(
    const std::vector<DailyAggregate>& days, Chain chain, const std::string& category);

/// Divides every value by the value on `event_date`. The event day itself
/// maps to exactly 1.0. Throws Error if the event day is missing or zero.
std::vector<std::pair<Date, double>> normalize_to_event(
    const std::vector<std::pair<Date, double>>& series, Date event_date);

/// Outcome split of bot transactions that touch a DEX (involvement trade or
/// interaction). Fractions sum to 1.
struct OutcomeDistribution {
  uint64_t trades = 0;
  uint64_t interaction_success = 0;
  uint64_t interaction_revert = 0;

  uint64_t total() const { return trades + interaction_success + interaction_revert; }
  double trade_frac() const { return static_cast<double>(trades) / static_cast<double>(total()); }
  double interaction_success_frac() const {
    return static_cast<double>(interaction_success) / static_cast<double>(total());
  }
  double interaction_revert_frac() const {
    return static_cast<double>(interaction_revert) / static_cast<double>(total());
  }
};

/// Throws Error when no transaction falls in scope.
OutcomeDistribution outcome_distribution(const std::vector<ClassifiedTx>& classified);

struct BotStats {
  Address contract;
  uint64_t swaps = 0;
  uint64_t txs_with_trades = 0;
  uint64_t non_reverted_txs = 0;
  uint64_t reverted_txs = 0;
  double txs_per_unique_calldata = 0.0;  // total txs / distinct calldata payloads
  uint64_t median_calldata_length = 0;   // hex characters, 0x stripped
  uint64_t gas_used = 0;
  double cumulative_gas_pct = 0.0;  // of all listed bots' gas, non-decreasing
};

/// Per-bot activity statistics, ranked by gas usage (descending, ties by
/// address). The cumulative percentage is taken over the supplied bot set.
std::vector<BotStats> bot_stats_table(const std::set<Address>& bots,
                                      const std::vector<TransactionRecord>& txs,
                                      const SwapsByTx& swaps);

struct RevertShareRow {
  Chain chain = Chain::Ethereum;
  Date date;
  uint64_t cyclic_reverts = 0;
  uint64_t other_reverts = 0;

  bool no_reverts() const { return cyclic_reverts + other_reverts == 0; }
  double cyclic_share() const;
  double other_share() const;
};

/// Share of each day's reverted transactions attributable to bot vs other
/// callers. Days without reverts report (0, 0) and are flagged.
std::vector<RevertShareRow> revert_share(const std::vector<ClassifiedTx>& classified,
                                         const std::vector<TransactionRecord>& txs);

/// Fraction of the contract's trading transactions containing exactly one
/// swap. Throws Error when the contract has no trading transactions.
double single_swap_dominance(const std::vector<const TransactionRecord*>& contract_txs,
                             const SwapsByTx& swaps);

// CSV emission. Schemas are documented in the README; wei quantities are
// decimal strings, floating-point values shortest round-trip.
void write_daily_gas_csv(std::ostream& out, const std::vector<DailyAggregate>& days);
void write_daily_shares_csv(std::ostream& out, const std::vector<DailyAggregate>& days);
void write_gas_price_stats_csv(std::ostream& out, const std::vector<DailyAggregate>& days);
void write_normalized_growth_csv(
    std::ostream& out,
    const std::vector<std::tuple<Chain, std::string, std::vector<std::pair<Date, double>>>>& series);
void write_outcome_distribution_csv(
    std::ostream& out, const std::vector<std::pair<Chain, OutcomeDistribution>>& rows);
void write_bot_stats_csv(std::ostream& out,
                         const std::vector<std::pair<Chain, std::vector<BotStats>>>& tables);
void write_revert_share_csv(std::ostream& out, const std::vector<RevertShareRow>& rows);
void write_single_swap_check_csv(
    std::ostream& out, const std::vector<std::tuple<Chain, Address, uint64_t, double>>& rows);

}  // namespace cyclarb
