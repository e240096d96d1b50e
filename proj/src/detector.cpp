#include "cyclarb/detector.hpp"

#include <algorithm>

namespace cyclarb {

std::pair<TokenPath, BalanceDelta> extract_features(std::vector<SwapEvent> trade) {
  if (trade.empty()) throw Error("extract_features: empty trade");
  std::sort(trade.begin(), trade.end(),
            [](const SwapEvent& a, const SwapEvent& b) { return a.evt_index < b.evt_index; });

  TokenPath path;
  path.tokens.reserve(trade.size() * 2);
  BalanceDelta delta;
  for (const SwapEvent& s : trade) {
    path.tokens.push_back(s.token_sold);
    path.tokens.push_back(s.token_bought);
    delta.deltas[s.token_sold] -= s.amount_sold;
    delta.deltas[s.token_bought] += s.amount_bought;
  }
  return {std::move(path), std::move(delta)};
}

bool is_cyclic(const TokenPath& path) {
  const auto& t = path.tokens;
  if (t.size() < 2 || t.size() % 2 != 0) return false;
  if (t.front() != t.back()) return false;
  // Continuity: bought token of swap j == sold token of swap j+1.
  for (size_t j = 1; j + 1 < t.size(); j += 2) {
    if (t[j] != t[j + 1]) return false;
  }
  return true;
}

bool is_profitable(const BalanceDelta& delta, const BigInt& dust_epsilon) {
  bool any_gain = false;
  for (const auto& [token, d] : delta.deltas) {
    if (d < -dust_epsilon) return false;
    if (d > 0) any_gain = true;
  }
  return any_gain;
}

std::vector<const TransactionRecord*> filter_router_aggregator(
    std::span<const TransactionRecord> txs, const LabelSet& labels) {
  std::vector<const TransactionRecord*> kept;
  kept.reserve(txs.size());
  for (const TransactionRecord& tx : txs) {
    if (tx.to_addr &&
        (labels.routers.count(*tx.to_addr) || labels.aggregators.count(*tx.to_addr))) {
      continue;
    }
    kept.push_back(&tx);
  }
  return kept;
}

CandidateSet detect_candidates(const std::vector<TransactionRecord>& txs,
                               const SwapsByTx& swaps, const LabelSet& labels,
                               const DetectorConfig& config) {
  CandidateSet result;
  for (const TransactionRecord& tx : txs) {
    auto it = swaps.find(tx.hash);
    if (it == swaps.end() || it->second.empty()) continue;
    result.counts.with_swaps++;

    if (tx.to_addr &&
        (labels.routers.count(*tx.to_addr) || labels.aggregators.count(*tx.to_addr))) {
      continue;
    }
    result.counts.after_router_filter++;

    auto [path, delta] = extract_features(it->second);
    if (!is_cyclic(path)) continue;
    result.counts.after_cyclic++;

    if (!is_profitable(delta, config.dust_epsilon)) continue;
    result.counts.after_profit++;

    if (!tx.to_addr) continue;  // contract creation has no first callee
    CandidateEvidence& entry = result.contracts[*tx.to_addr];
    entry.total++;
    entry.first_seen_block =
        entry.total == 1 ? tx.block_number : std::min(entry.first_seen_block, tx.block_number);

    // Retain the evidence_cap lowest tx hashes; keeps memory bounded and
    // the retained set independent of input order.
    Evidence ev{tx.hash, std::move(path), std::move(delta)};
    auto pos = std::lower_bound(
        entry.samples.begin(), entry.samples.end(), ev,
        [](const Evidence& a, const Evidence& b) { return a.tx_hash < b.tx_hash; });
    if (entry.samples.size() < config.evidence_cap) {
      entry.samples.insert(pos, std::move(ev));
    } else if (pos != entry.samples.end()) {
      entry.samples.insert(pos, std::move(ev));
      entry.samples.pop_back();
    }
  }
  return result;
}

}  // namespace cyclarb
