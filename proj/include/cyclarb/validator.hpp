#pragma once

#include "cyclarb/detector.hpp"
#include "cyclarb/types.hpp"

#include <optional>

namespace cyclarb {

struct ValidatorConfig {
  double dex_interaction_min = 0.6;  // below this rate -> excluded
  uint32_t eoa_max = 3;              // more distinct EOAs + human cadence -> excluded
  int64_t human_gap_seconds = 30;    // median inter-tx gap must exceed this
  int64_t human_burst_window_seconds = 60;
  uint32_t human_burst_max = 10;     // max txs inside any burst window
  double gas_coverage = 0.8;         // stop scoring once validated gas passes this
};

/// Nearest-rank percentiles of swap counts per trading transaction.
struct SwapPercentiles {
  uint32_t p10 = 0, p25 = 0, p50 = 0, p75 = 0, p90 = 0;
};

enum class Verdict : uint8_t { Validated, Excluded, Unreviewed };
std::string_view to_string(Verdict v);

struct ValidationReport {
  Address address;
  uint64_t gas_used_total = 0;
  double dex_interaction_rate = 1.0;
  uint32_t distinct_eoas = 0;
  bool human_plausible = false;
  std::optional<SwapPercentiles> swap_percentiles;  // absent without trading txs
  Verdict verdict = Verdict::Unreviewed;
  std::vector<std::string> reasons;  // non-empty iff Excluded
};

struct ValidationOutcome {
  std::set<Address> validated;            // Validated plus Unreviewed candidates
  std::vector<ValidationReport> reports;  // in gas ranking order
  double coverage = 0.0;                  // validated gas / non-excluded gas
};

/// Fraction of the contract's non-trading transactions (no swap events)
/// whose trace touches any pool address. Defined as 1.0 when the contract
/// has no non-trading transactions, so pure traders are never excluded by
/// this screen. `contract_txs` are the transactions whose first callee is
/// the contract under review.
double dex_interaction_rate(const std::vector<const TransactionRecord*>& contract_txs,
                            const TracesByTx& traces, const SwapsByTx& swaps,
                            const std::set<Address>& pools);

/// Distinct initiating EOAs and whether the interaction cadence could
/// credibly be human: median inter-transaction gap above the threshold and
/// no burst window holding more than the allowed count. Contracts with
/// fewer than two transactions have no measurable cadence and report false.
std::pair<uint32_t, bool> caller_profile(
    const std::vector<const TransactionRecord*>& contract_txs,
    const ValidatorConfig& config = {});

/// Nearest-rank percentiles (value at index ceil(q*n), 1-based, ascending)
/// over per-transaction swap counts, restricted to transactions with at
/// least one swap. Throws Error when the contract has no trading txs.
SwapPercentiles swap_count_percentiles(
    const std::vector<const TransactionRecord*>& contract_txs, const SwapsByTx& swaps);

/// Scores candidates in descending gas order (ties by address) until the
/// gas of validated contracts exceeds the coverage threshold of all
/// non-excluded candidate gas. A scored candidate is Excluded iff it has an
/// exclusion label, its DEX-interaction rate is below the minimum, it is
/// called by more than eoa_max EOAs at a human-plausible cadence, or its
/// P10/P25 swap percentile equals one. Excluded gas leaves both sides of
/// the coverage ratio. Candidates past the stopping point are Unreviewed
/// and still included in the validated output.
ValidationOutcome validate(const CandidateSet& candidates,
                           const std::vector<TransactionRecord>& txs,
                           const TracesByTx& traces, const SwapsByTx& swaps,
                           const std::set<Address>& pools,
                           const std::map<Address, std::string>& exclusions,
                           const ValidatorConfig& config = {});

}  // namespace cyclarb
