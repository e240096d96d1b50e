#include "cyclarb/pipeline.hpp"

#include "cyclarb/ingest.hpp"
#include "cyclarb/metrics.hpp"
#include "cyclarb/similarity.hpp"
#include "cyclarb/stats.hpp"
#include "util/csv.hpp"
#include "util/lines.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace cyclarb::pipeline {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string chain_dir(const PipelineConfig& config, Chain chain) {
  return (fs::path(config.out_dir) / std::string(to_string(chain))).string();
}

std::ofstream open_out(const std::string& path) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write output file: " + path);
  return out;
}

void require_input(const std::string& path) {
  if (!fs::exists(path)) throw FileError(path);
}

unsigned effective_workers(const PipelineConfig& config) {
  if (config.workers != 0) return config.workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

std::string candidates_path(const PipelineConfig& config, Chain chain) {
  return (fs::path(chain_dir(config, chain)) / "candidates.json").string();
}
std::string validation_report_path(const PipelineConfig& config, Chain chain) {
  return (fs::path(chain_dir(config, chain)) / "validation_report.csv").string();
}
std::string bots_path(const PipelineConfig& config, Chain chain) {
  return (fs::path(chain_dir(config, chain)) / "bots.json").string();
}
std::string classified_path(const PipelineConfig& config, Chain chain) {
  return (fs::path(chain_dir(config, chain)) / "classified.jsonl").string();
}

ChainData load_chain(const PipelineConfig& config, Chain chain) {
  ChainData data;
  data.chain = chain;
  const std::string tx_path = config.path_for(config.transactions_path, chain);
  const std::string swaps_path = config.path_for(config.swaps_path, chain);
  const std::string traces_path = config.path_for(config.traces_path, chain);
  const std::string labels_path = config.path_for(config.labels_path, chain);
  require_input(tx_path);
  require_input(swaps_path);
  require_input(traces_path);
  require_input(labels_path);
  data.txs = load_transactions(tx_path, chain);
  data.swaps = load_swaps(swaps_path);
  data.traces = load_traces(traces_path);
  data.labels = load_labels(labels_path);
  return data;
}

// ---------------------------------------------------------------------------
// Artifact IO
// ---------------------------------------------------------------------------

void write_candidates_json(const std::string& path, const CandidateSet& candidates) {
  ordered_json doc = ordered_json::array();
  for (const auto& [addr, evidence] : candidates.contracts) {
    ordered_json entry;
    entry["address"] = addr.hex();
    entry["evidence_count"] = evidence.total;
    entry["first_seen_block"] = evidence.first_seen_block;
    auto hashes = ordered_json::array();
    const size_t limit = std::min<size_t>(evidence.samples.size(), 5);
    for (size_t i = 0; i < limit; ++i) hashes.push_back(evidence.samples[i].tx_hash.hex());
    entry["sample_tx_hashes"] = std::move(hashes);
    doc.push_back(std::move(entry));
  }
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

CandidateSet read_candidates_json(const std::string& path) {
  require_input(path);
  std::ifstream in(path);
  nlohmann::json doc;
  in >> doc;
  CandidateSet candidates;
  for (const auto& entry : doc) {
    const Address addr = Address::parse(entry.at("address").get<std::string>());
    CandidateEvidence& evidence = candidates.contracts[addr];
    evidence.total = entry.at("evidence_count").get<uint64_t>();
    evidence.first_seen_block = entry.at("first_seen_block").get<uint64_t>();
    for (const auto& hash : entry.at("sample_tx_hashes")) {
      Evidence ev;
      ev.tx_hash = TxHash::parse(hash.get<std::string>());
      evidence.samples.push_back(std::move(ev));
    }
  }
  return candidates;
}

void write_validation_report_csv(const std::string& path, const ValidationOutcome& outcome) {
  auto out = open_out(path);
  out << "rank,address,gas_used_total,dex_interaction_rate,distinct_eoas,human_plausible,"
         "p10,p25,p50,p75,p90,verdict,reasons\n";
  size_t rank = 0;
  for (const ValidationReport& report : outcome.reports) {
    ++rank;
    std::string reasons;
    for (size_t i = 0; i < report.reasons.size(); ++i) {
      if (i) reasons += "; ";
      reasons += report.reasons[i];
    }
    auto pct = [&](uint32_t SwapPercentiles::*member) {
      return report.swap_percentiles ? std::to_string(report.swap_percentiles.value().*member)
                                     : std::string();
    };
    util::write_csv_row(
        out, {std::to_string(rank), report.address.hex(), std::to_string(report.gas_used_total),
              format_double(report.dex_interaction_rate), std::to_string(report.distinct_eoas),
              report.human_plausible ? "true" : "false", pct(&SwapPercentiles::p10),
              pct(&SwapPercentiles::p25), pct(&SwapPercentiles::p50), pct(&SwapPercentiles::p75),
              pct(&SwapPercentiles::p90), std::string(to_string(report.verdict)), reasons});
  }
  out << "#coverage=" << format_double(outcome.coverage) << '\n';
}

void write_bots_json(const std::string& path, const ValidationOutcome& outcome) {
  ordered_json doc;
  auto addrs = ordered_json::array();
  for (const Address& addr : outcome.validated) addrs.push_back(addr.hex());
  doc["validated"] = std::move(addrs);
  doc["coverage"] = outcome.coverage;
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

std::set<Address> read_bots_json(const std::string& path) {
  require_input(path);
  std::ifstream in(path);
  nlohmann::json doc;
  in >> doc;
  std::set<Address> bots;
  for (const auto& addr : doc.at("validated")) {
    bots.insert(Address::parse(addr.get<std::string>()));
  }
  return bots;
}

void write_classified_jsonl(const std::string& path,
                            const std::vector<ClassifiedTx>& classified) {
  auto out = open_out(path);
  for (const ClassifiedTx& c : classified) {
    ordered_json obj;
    obj["hash"] = c.hash.hex();
    obj["purpose"] = std::string(to_string(c.purpose));
    obj["involvement"] = std::string(to_string(c.involvement));
    obj["outcome"] = std::string(to_string(c.outcome));
    out << obj.dump() << '\n';
  }
}

std::vector<ClassifiedTx> read_classified_jsonl(const std::string& path) {
  require_input(path);
  std::vector<ClassifiedTx> out;
  util::for_each_line(path, [&](size_t lineno, const std::string& line) {
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": not a JSON object");
    }
    ClassifiedTx c;
    c.hash = TxHash::parse(obj.at("hash").get<std::string>());
    c.purpose = parse_purpose(obj.at("purpose").get<std::string>());
    c.involvement = parse_involvement(obj.at("involvement").get<std::string>());
    c.outcome = parse_outcome(obj.at("outcome").get<std::string>());
    out.push_back(std::move(c));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

namespace {

CandidateSet detect_chain(const PipelineConfig& config, const ChainData& data) {
  CandidateSet candidates =
      detect_candidates(data.txs, data.swaps, data.labels, config.detector);
  write_candidates_json(candidates_path(config, data.chain), candidates);
  return candidates;
}

ValidationOutcome validate_chain(const PipelineConfig& config, const ChainData& data,
                                 const CandidateSet& candidates) {
  ValidationOutcome outcome =
      validate(candidates, data.txs, data.traces, data.swaps, data.labels.dex_pools,
               data.labels.exclusion_labels, config.validator);
  write_validation_report_csv(validation_report_path(config, data.chain), outcome);
  write_bots_json(bots_path(config, data.chain), outcome);
  return outcome;
}

std::vector<ClassifiedTx> classify_chain(const PipelineConfig& config, const ChainData& data,
                                         const std::set<Address>& bots) {
  ClassifyStats stats;
  std::vector<ClassifiedTx> classified =
      classify_all(data.txs, data.swaps, data.traces, data.labels.dex_pools, bots, &stats);
  if (stats.missing_trace_residuals > 0) {
    std::cerr << "[" << to_string(data.chain) << "] " << stats.missing_trace_residuals
              << " swap-less transaction(s) had no trace data; classified residual\n";
  }
  write_classified_jsonl(classified_path(config, data.chain), classified);
  return classified;
}

struct ChainMetricsInput {
  ChainData data;
  std::vector<ClassifiedTx> classified;
  std::set<Address> bots;
};

void emit_metrics(const PipelineConfig& config, const std::vector<ChainMetricsInput>& chains) {
  const fs::path metrics_dir = fs::path(config.out_dir) / "metrics";
  const unsigned workers = effective_workers(config);

  std::vector<DailyAggregate> all_days;
  for (const ChainMetricsInput& input : chains) {
    auto days = aggregate_daily(input.classified, input.data.txs, workers);
    all_days.insert(all_days.end(), std::make_move_iterator(days.begin()),
                    std::make_move_iterator(days.end()));
  }

  {
    auto out = open_out((metrics_dir / "daily_gas.csv").string());
    write_daily_gas_csv(out, all_days);
  }
  {
    auto out = open_out((metrics_dir / "daily_shares.csv").string());
    write_daily_shares_csv(out, all_days);
  }
  {
    auto out = open_out((metrics_dir / "gas_price_stats.csv").string());
    write_gas_price_stats_csv(out, all_days);
  }

  // Growth curves normalized to the configured event day; chains whose
  // series do not span the event day are skipped with a warning.
  std::vector<std::tuple<Chain, std::string, std::vector<std::pair<Date, double>>>> growth;
  for (const ChainMetricsInput& input : chains) {
    for (const char* category : {"cyclicArb", "other", "total"}) {
      auto series = daily_gas_series(all_days, input.data.chain, category);
      try {
        growth.emplace_back(input.data.chain, category,
                            normalize_to_event(series, config.event_date));
      } catch (const Error& e) {
        std::cerr << "[" << to_string(input.data.chain) << "] normalized growth (" << category
                  << "): " << e.what() << "\n";
      }
    }
  }
  {
    auto out = open_out((metrics_dir / "normalized_growth.csv").string());
    write_normalized_growth_csv(out, growth);
  }

  std::vector<std::pair<Chain, OutcomeDistribution>> outcomes;
  for (const ChainMetricsInput& input : chains) {
    try {
      outcomes.emplace_back(input.data.chain, outcome_distribution(input.classified));
    } catch (const Error& e) {
      std::cerr << "[" << to_string(input.data.chain) << "] outcome distribution: " << e.what()
                << "\n";
    }
  }
  {
    auto out = open_out((metrics_dir / "outcome_distribution.csv").string());
    write_outcome_distribution_csv(out, outcomes);
  }

  std::vector<std::pair<Chain, std::vector<BotStats>>> bot_tables;
  for (const ChainMetricsInput& input : chains) {
    bot_tables.emplace_back(input.data.chain,
                            bot_stats_table(input.bots, input.data.txs, input.data.swaps));
  }
  {
    auto out = open_out((metrics_dir / "bot_stats.csv").string());
    write_bot_stats_csv(out, bot_tables);
  }

  std::vector<RevertShareRow> reverts;
  for (const ChainMetricsInput& input : chains) {
    auto rows = revert_share(input.classified, input.data.txs);
    reverts.insert(reverts.end(), rows.begin(), rows.end());
  }
  {
    auto out = open_out((metrics_dir / "revert_share.csv").string());
    write_revert_share_csv(out, reverts);
  }

  // Appendix-style corroboration: single-swap dominance of the heaviest
  // non-bot trading contracts (top 20 by gas per chain).
  std::vector<std::tuple<Chain, Address, uint64_t, double>> checks;
  for (const ChainMetricsInput& input : chains) {
    std::map<Address, std::vector<const TransactionRecord*>> by_contract;
    std::map<Address, uint64_t> gas;
    for (const TransactionRecord& tx : input.data.txs) {
      if (!tx.to_addr || input.bots.count(*tx.to_addr)) continue;
      auto sit = input.data.swaps.find(tx.hash);
      if (sit == input.data.swaps.end() || sit->second.empty()) continue;
      by_contract[*tx.to_addr].push_back(&tx);
      gas[*tx.to_addr] += tx.gas_used;
    }
    std::vector<std::pair<Address, uint64_t>> ranked(gas.begin(), gas.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (ranked.size() > 20) ranked.resize(20);
    for (const auto& [addr, total_gas] : ranked) {
      const auto& ctxs = by_contract[addr];
      checks.emplace_back(input.data.chain, addr, ctxs.size(),
                          single_swap_dominance(ctxs, input.data.swaps));
    }
  }
  {
    auto out = open_out((metrics_dir / "single_swap_check.csv").string());
    write_single_swap_check_csv(out, checks);
  }
}

void emit_regressions(const PipelineConfig& config,
                      const std::vector<ChainMetricsInput>& chains) {
  const std::string ohlc_file = config.ohlc_path;
  require_input(ohlc_file);
  const std::vector<OhlcBar> ohlc = load_ohlc(ohlc_file);

  ordered_json doc;
  for (const ChainMetricsInput& input : chains) {
    // Per-day dependent/independent counts for this chain.
    std::map<int32_t, DailyCounts> days;
    for (size_t i = 0; i < input.data.txs.size(); ++i) {
      const TransactionRecord& tx = input.data.txs[i];
      const ClassifiedTx& c = input.classified[i];
      const Date day = Date::from_timestamp(tx.timestamp);
      DailyCounts& entry = days[day.days()];
      entry.date = day;
      if (c.purpose == Purpose::CyclicArb) {
        entry.cyclic_txs += 1;
        if (c.involvement == Involvement::Trade) entry.cyclic_trade_txs += 1;
      } else if (c.involvement == Involvement::Trade) {
        entry.retail_txs += 1;
        if (tx.to_addr && input.data.labels.aggregators.count(*tx.to_addr)) {
          entry.retail_agg_trades += 1;
        }
      }
    }
    std::vector<DailyCounts> counts;
    counts.reserve(days.size());
    for (auto& [key, entry] : days) counts.push_back(entry);

    ordered_json chain_doc;
    try {
      uint64_t gaps = 0;
      const RegressionFrame frame = build_frame(counts, ohlc, config.allow_date_gaps, &gaps);
      if (gaps > 0) {
        std::cerr << "[" << to_string(input.data.chain) << "] regression frame skipped " << gaps
                  << " date gap(s)\n";
      }
      Matrix X(frame.rows(), 5);
      for (size_t i = 0; i < frame.rows(); ++i) {
        X.at(i, 0) = 1.0;
        X.at(i, 1) = frame.d_price[i];
        X.at(i, 2) = frame.d_volatility[i];
        X.at(i, 3) = frame.d_retail_txs[i];
        X.at(i, 4) = frame.d_retail_agg_frac[i];
      }
      static constexpr const char* kNames[] = {"const", "d_price", "d_volatility",
                                               "d_retail_txs", "d_retail_agg_frac"};
      auto fit_to_json = [&](std::span<const double> y) {
        const OlsResult fit = ols_fit(y, X);
        ordered_json j;
        j["obs"] = fit.obs;
        ordered_json coeffs;
        for (size_t c = 0; c < fit.beta.size(); ++c) {
          ordered_json entry;
          entry["estimate"] = fit.beta[c];
          entry["robust_se"] = fit.robust_se[c];
          entry["t"] = fit.t_values[c];
          entry["p"] = fit.p_values[c];
          entry["stars"] = fit.stars(c);
          coeffs[kNames[c]] = std::move(entry);
        }
        j["coefficients"] = std::move(coeffs);
        j["r2"] = fit.r2;
        j["adj_r2"] = fit.adj_r2;
        j["f_stat"] = fit.f_stat;
        return j;
      };
      chain_doc["d_cyclic_arb_tx"] = fit_to_json(frame.d_cyclic_txs);
      chain_doc["d_cyclic_arb_tx_w_trade"] = fit_to_json(frame.d_cyclic_trade_txs);
    } catch (const Error& e) {
      chain_doc["error"] = e.what();
      std::cerr << "[" << to_string(input.data.chain) << "] regression: " << e.what() << "\n";
    }
    doc[std::string(to_string(input.data.chain))] = std::move(chain_doc);
  }

  auto out = open_out((fs::path(config.out_dir) / "regression_results.json").string());
  out << doc.dump(2) << '\n';
}

std::vector<ChainMetricsInput> load_metrics_inputs(const PipelineConfig& config) {
  std::vector<ChainMetricsInput> inputs;
  for (Chain chain : config.chains) {
    ChainMetricsInput input;
    input.data = load_chain(config, chain);
    input.classified = read_classified_jsonl(classified_path(config, chain));
    if (input.classified.size() != input.data.txs.size()) {
      throw DataError("classified.jsonl does not match transactions for chain " +
                      std::string(to_string(chain)) + "; re-run classify");
    }
    input.bots = read_bots_json(bots_path(config, chain));
    inputs.push_back(std::move(input));
  }
  return inputs;
}

}  // namespace

void run_detect(const PipelineConfig& config) {
  for (Chain chain : config.chains) {
    const ChainData data = load_chain(config, chain);
    detect_chain(config, data);
  }
}

void run_validate(const PipelineConfig& config) {
  for (Chain chain : config.chains) {
    const ChainData data = load_chain(config, chain);
    const CandidateSet candidates = read_candidates_json(candidates_path(config, chain));
    validate_chain(config, data, candidates);
  }
}

void run_classify(const PipelineConfig& config) {
  for (Chain chain : config.chains) {
    const ChainData data = load_chain(config, chain);
    const std::set<Address> bots = read_bots_json(bots_path(config, chain));
    classify_chain(config, data, bots);
  }
}

void run_metrics(const PipelineConfig& config) {
  emit_metrics(config, load_metrics_inputs(config));
}

void run_similarity(const PipelineConfig& config) {
  require_input(config.bytecode_path);
  const std::vector<ContractBytecode> bytecodes = load_bytecode(config.bytecode_path);
  const SimilarityMatrix matrix =
      similarity_matrix(bytecodes, config.ngram_n, effective_workers(config));
  {
    auto out = open_out((fs::path(config.out_dir) / "similarity_matrix.csv").string());
    write_similarity_matrix_csv(out, matrix);
  }
  {
    auto out = open_out((fs::path(config.out_dir) / "clone_clusters.json").string());
    write_clone_clusters_json(out, clone_clusters(bytecodes));
  }
}

void run_regress(const PipelineConfig& config) {
  emit_regressions(config, load_metrics_inputs(config));
}

void run_pipeline(const PipelineConfig& config) {
  std::vector<ChainMetricsInput> inputs;
  for (Chain chain : config.chains) {
    ChainMetricsInput input;
    input.data = load_chain(config, chain);
    const CandidateSet candidates = detect_chain(config, input.data);
    const ValidationOutcome outcome = validate_chain(config, input.data, candidates);
    input.bots = outcome.validated;
    input.classified = classify_chain(config, input.data, input.bots);
    inputs.push_back(std::move(input));
  }
  emit_metrics(config, inputs);
  run_similarity(config);
  emit_regressions(config, inputs);
}

void run_stage(const std::string& stage, const PipelineConfig& config) {
  if (stage == "detect") run_detect(config);
  else if (stage == "validate") run_validate(config);
  else if (stage == "classify") run_classify(config);
  else if (stage == "metrics") run_metrics(config);
  else if (stage == "similarity") run_similarity(config);
  else if (stage == "regress") run_regress(config);
  else if (stage == "pipeline") run_pipeline(config);
  else throw Error("unknown stage: '" + stage + "'");
}

}  // namespace cyclarb::pipeline
