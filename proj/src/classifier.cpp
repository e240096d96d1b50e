#include "cyclarb/classifier.hpp"

namespace cyclarb {

std::string_view to_string(Purpose p) {
  return p == Purpose::CyclicArb ? "cyclicArb" : "other";
}

std::string_view to_string(Involvement i) {
  switch (i) {
    case Involvement::Trade: return "trade";
    case Involvement::Interaction: return "interaction";
    case Involvement::Residual: return "residual";
  }
  return "unknown";
}

std::string_view to_string(Outcome o) {
  return o == Outcome::Success ? "success" : "revert";
}

Purpose parse_purpose(std::string_view s) {
  if (s == "cyclicArb") return Purpose::CyclicArb;
  if (s == "other") return Purpose::Other;
  throw Error("unknown purpose: '" + std::string(s) + "'");
}

Involvement parse_involvement(std::string_view s) {
  if (s == "trade") return Involvement::Trade;
  if (s == "interaction") return Involvement::Interaction;
  if (s == "residual") return Involvement::Residual;
  throw Error("unknown involvement: '" + std::string(s) + "'");
}

Outcome parse_outcome(std::string_view s) {
  if (s == "success") return Outcome::Success;
  if (s == "revert") return Outcome::Revert;
  throw Error("unknown outcome: '" + std::string(s) + "'");
}

Purpose classify_purpose(const TransactionRecord& tx, const std::set<Address>& bots) {
  if (tx.to_addr && bots.count(*tx.to_addr)) return Purpose::CyclicArb;
  return Purpose::Other;
}

Involvement classify_involvement(const TransactionRecord& tx, const SwapsByTx& swaps,
                                 const TracesByTx& traces, const std::set<Address>& pools) {
  auto sit = swaps.find(tx.hash);
  if (sit != swaps.end() && !sit->second.empty()) return Involvement::Trade;
  auto tit = traces.find(tx.hash);
  if (tit != traces.end()) {
    for (const TraceCall& call : tit->second) {
      if (pools.count(call.callee)) return Involvement::Interaction;
    }
  }
  return Involvement::Residual;
}

Outcome classify_outcome(const TransactionRecord& tx) {
  return tx.status == TxStatus::Success ? Outcome::Success : Outcome::Revert;
}

std::vector<ClassifiedTx> classify_all(const std::vector<TransactionRecord>& txs,
                                       const SwapsByTx& swaps, const TracesByTx& traces,
                                       const std::set<Address>& pools,
                                       const std::set<Address>& bots,
                                       ClassifyStats* stats) {
  std::vector<ClassifiedTx> out;
  out.reserve(txs.size());
  for (const TransactionRecord& tx : txs) {
    ClassifiedTx c;
    c.hash = tx.hash;
    c.purpose = classify_purpose(tx, bots);
    c.involvement = classify_involvement(tx, swaps, traces, pools);
    c.outcome = classify_outcome(tx);
    if (c.involvement == Involvement::Trade && c.outcome == Outcome::Revert) {
      throw DataError("reverted transaction " + tx.hash.hex() +
                      " carries swap events; reverted transactions cannot emit swap logs");
    }
    if (stats && c.involvement == Involvement::Residual && !traces.count(tx.hash)) {
      auto sit = swaps.find(tx.hash);
      if (sit == swaps.end() || sit->second.empty()) stats->missing_trace_residuals++;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace cyclarb
