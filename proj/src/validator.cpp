#include "cyclarb/validator.hpp"

#include <algorithm>
#include <unordered_map>

namespace cyclarb {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Validated: return "validated";
    case Verdict::Excluded: return "excluded";
    case Verdict::Unreviewed: return "unreviewed";
  }
  return "unknown";
}

namespace {

bool has_swaps(const SwapsByTx& swaps, const TxHash& hash) {
  auto it = swaps.find(hash);
  return it != swaps.end() && !it->second.empty();
}

/// value at 1-based rank ceil(pct*n/100) of an ascending-sorted vector
uint32_t nearest_rank(const std::vector<uint32_t>& sorted, unsigned pct) {
  const size_t n = sorted.size();
  size_t rank = (static_cast<size_t>(pct) * n + 99) / 100;
  if (rank == 0) rank = 1;
  return sorted[rank - 1];
}

int64_t nearest_rank_i64(std::vector<int64_t> values, unsigned pct) {
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  size_t rank = (static_cast<size_t>(pct) * n + 99) / 100;
  if (rank == 0) rank = 1;
  return values[rank - 1];
}

}  // namespace

double dex_interaction_rate(const std::vector<const TransactionRecord*>& contract_txs,
                            const TracesByTx& traces, const SwapsByTx& swaps,
                            const std::set<Address>& pools) {
  uint64_t non_trading = 0;
  uint64_t touching = 0;
  for (const TransactionRecord* tx : contract_txs) {
    if (has_swaps(swaps, tx->hash)) continue;
    ++non_trading;
    auto it = traces.find(tx->hash);
    if (it == traces.end()) continue;
    for (const TraceCall& call : it->second) {
      if (pools.count(call.callee)) {
        ++touching;
        break;
      }
    }
  }
  if (non_trading == 0) return 1.0;
  return static_cast<double>(touching) / static_cast<double>(non_trading);
}

std::pair<uint32_t, bool> caller_profile(
    const std::vector<const TransactionRecord*>& contract_txs,
    const ValidatorConfig& config) {
  std::set<Address> eoas;
  std::vector<int64_t> times;
  times.reserve(contract_txs.size());
  for (const TransactionRecord* tx : contract_txs) {
    eoas.insert(tx->from_addr);
    times.push_back(tx->timestamp);
  }
  const auto distinct = static_cast<uint32_t>(eoas.size());
  if (times.size() < 2) return {distinct, false};

  std::sort(times.begin(), times.end());
  std::vector<int64_t> gaps;
  gaps.reserve(times.size() - 1);
  for (size_t i = 1; i < times.size(); ++i) gaps.push_back(times[i] - times[i - 1]);
  const int64_t median_gap = nearest_rank_i64(std::move(gaps), 50);

  // max transactions inside any half-open window of the configured length
  uint32_t max_burst = 0;
  size_t lo = 0;
  for (size_t hi = 0; hi < times.size(); ++hi) {
    while (times[hi] - times[lo] >= config.human_burst_window_seconds) ++lo;
    max_burst = std::max(max_burst, static_cast<uint32_t>(hi - lo + 1));
  }

  const bool plausible =
      median_gap > config.human_gap_seconds && max_burst <= config.human_burst_max;
  return {distinct, plausible};
}

SwapPercentiles swap_count_percentiles(
    const std::vector<const TransactionRecord*>& contract_txs, const SwapsByTx& swaps) {
  std::vector<uint32_t> counts;
  for (const TransactionRecord* tx : contract_txs) {
    auto it = swaps.find(tx->hash);
    if (it == swaps.end() || it->second.empty()) continue;
    counts.push_back(static_cast<uint32_t>(it->second.size()));
  }
  if (counts.empty()) {
    throw Error("swap_count_percentiles: contract has no trading transactions");
  }
  std::sort(counts.begin(), counts.end());
  return {nearest_rank(counts, 10), nearest_rank(counts, 25), nearest_rank(counts, 50),
          nearest_rank(counts, 75), nearest_rank(counts, 90)};
}

ValidationOutcome validate(const CandidateSet& candidates,
                           const std::vector<TransactionRecord>& txs,
                           const TracesByTx& traces, const SwapsByTx& swaps,
                           const std::set<Address>& pools,
                           const std::map<Address, std::string>& exclusions,
                           const ValidatorConfig& config) {
  // Group the chain's transactions by first callee, candidates only.
  std::map<Address, std::vector<const TransactionRecord*>> by_contract;
  for (const auto& [addr, evidence] : candidates.contracts) by_contract[addr];
  for (const TransactionRecord& tx : txs) {
    if (!tx.to_addr) continue;
    auto it = by_contract.find(*tx.to_addr);
    if (it != by_contract.end()) it->second.push_back(&tx);
  }

  struct Ranked {
    Address address;
    uint64_t gas = 0;
  };
  std::vector<Ranked> ranking;
  ranking.reserve(by_contract.size());
  uint64_t total_gas = 0;
  for (const auto& [addr, ctxs] : by_contract) {
    uint64_t gas = 0;
    for (const TransactionRecord* tx : ctxs) gas += tx->gas_used;
    ranking.push_back({addr, gas});
    total_gas += gas;
  }
  std::sort(ranking.begin(), ranking.end(), [](const Ranked& a, const Ranked& b) {
    if (a.gas != b.gas) return a.gas > b.gas;
    return a.address < b.address;
  });

  ValidationOutcome outcome;
  uint64_t validated_gas = 0;
  uint64_t excluded_gas = 0;
  for (const Ranked& ranked : ranking) {
    const auto& ctxs = by_contract[ranked.address];

    ValidationReport report;
    report.address = ranked.address;
    report.gas_used_total = ranked.gas;
    report.dex_interaction_rate = dex_interaction_rate(ctxs, traces, swaps, pools);
    std::tie(report.distinct_eoas, report.human_plausible) = caller_profile(ctxs, config);
    try {
      report.swap_percentiles = swap_count_percentiles(ctxs, swaps);
    } catch (const Error&) {
      report.swap_percentiles.reset();  // screen not applicable
    }

    const long double non_excluded =
        static_cast<long double>(total_gas) - static_cast<long double>(excluded_gas);
    const bool coverage_met =
        static_cast<long double>(validated_gas) > config.gas_coverage * non_excluded;

    if (coverage_met) {
      report.verdict = Verdict::Unreviewed;
      outcome.validated.insert(ranked.address);
    } else {
      auto excl = exclusions.find(ranked.address);
      if (excl != exclusions.end()) {
        report.reasons.push_back("exclusion label: " + excl->second);
      }
      if (report.dex_interaction_rate < config.dex_interaction_min) {
        report.reasons.push_back("dex interaction rate below threshold");
      }
      if (report.distinct_eoas > config.eoa_max && report.human_plausible) {
        report.reasons.push_back("caller profile: many EOAs at human-plausible cadence");
      }
      if (report.swap_percentiles &&
          (report.swap_percentiles->p10 == 1 || report.swap_percentiles->p25 == 1)) {
        report.reasons.push_back("single-swap percentile screen");
      }
      if (report.reasons.empty()) {
        report.verdict = Verdict::Validated;
        validated_gas += ranked.gas;
        outcome.validated.insert(ranked.address);
      } else {
        report.verdict = Verdict::Excluded;
        excluded_gas += ranked.gas;
      }
    }
    outcome.reports.push_back(std::move(report));
  }

  const uint64_t non_excluded_total = total_gas - excluded_gas;
  outcome.coverage = non_excluded_total == 0
                        ? 1.0
                        : static_cast<double>(static_cast<long double>(validated_gas) /
                                              static_cast<long double>(non_excluded_total));
  return outcome;
}

}  // namespace cyclarb
