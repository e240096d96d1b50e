#include "cyclarb/metrics.hpp"

#include "cyclarb/ingest.hpp"
#include "util/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <thread>

namespace cyclarb {

std::string category_key(Purpose p, Involvement i, Outcome o) {
  std::string key;
  key.reserve(32);
  key += to_string(p);
  key += '-';
  key += to_string(i);
  key += '-';
  key += to_string(o);
  return key;
}

const std::vector<std::string>& reachable_categories() {
  static const std::vector<std::string> cats = [] {
    std::vector<std::string> v;
    for (Purpose p : {Purpose::CyclicArb, Purpose::Other}) {
      for (Involvement i : {Involvement::Trade, Involvement::Interaction, Involvement::Residual}) {
        for (Outcome o : {Outcome::Success, Outcome::Revert}) {
          if (i == Involvement::Trade && o == Outcome::Revert) continue;
          v.push_back(category_key(p, i, o));
        }
      }
    }
    return v;
  }();
  return cats;
}

void CategoryAgg::add_tx(const TransactionRecord& tx) {
  tx_count++;
  gas_used += tx.gas_used;
  fees_wei += BigInt(tx.gas_used) * tx.gas_price;
  gas_price_sum += tx.gas_price;
  gas_prices.push_back(tx.gas_price);
}

void CategoryAgg::merge(CategoryAgg&& other) {
  tx_count += other.tx_count;
  gas_used += other.gas_used;
  fees_wei += other.fees_wei;
  gas_price_sum += other.gas_price_sum;
  gas_prices.insert(gas_prices.end(), std::make_move_iterator(other.gas_prices.begin()),
                    std::make_move_iterator(other.gas_prices.end()));
}

BigInt CategoryAgg::median_gas_price() const {
  if (gas_prices.empty()) return BigInt(0);
  std::vector<BigInt> sorted = gas_prices;
  std::sort(sorted.begin(), sorted.end());
  const size_t rank = (50 * sorted.size() + 99) / 100;  // nearest rank, 1-based
  return sorted[rank - 1];
}

double CategoryAgg::mean_gas_price() const {
  if (tx_count == 0) return 0.0;
  return gas_price_sum.convert_to<double>() / static_cast<double>(tx_count);
}

double CategoryAgg::avg_price_per_gas() const {
  if (gas_used == 0) return 0.0;
  return fees_wei.convert_to<double>() / static_cast<double>(gas_used);
}

namespace {

using DailyKey = std::pair<Chain, int32_t>;
using DailyMap = std::map<DailyKey, DailyAggregate>;

void add_to_map(DailyMap& map, const ClassifiedTx& c, const TransactionRecord& tx) {
  const Date day = Date::from_timestamp(tx.timestamp);
  DailyAggregate& agg = map[{tx.chain, day.days()}];
  agg.chain = tx.chain;
  agg.date = day;
  agg.categories[category_key(c.purpose, c.involvement, c.outcome)].add_tx(tx);
  agg.categories[std::string(to_string(c.purpose))].add_tx(tx);
  agg.categories["total"].add_tx(tx);
}

void merge_maps(DailyMap& into, DailyMap&& from) {
  for (auto& [key, agg] : from) {
    auto it = into.find(key);
    if (it == into.end()) {
      into.emplace(key, std::move(agg));
    } else {
      for (auto& [cat, part] : agg.categories) {
        it->second.categories[cat].merge(std::move(part));
      }
    }
  }
}

std::vector<DailyAggregate> finalize(DailyMap&& map) {
  std::vector<DailyAggregate> out;
  out.reserve(map.size());
  for (auto& [key, agg] : map) {
    for (auto& [cat, entry] : agg.categories) {
      std::sort(entry.gas_prices.begin(), entry.gas_prices.end());
    }
    out.push_back(std::move(agg));
  }
  return out;
}

DailyMap to_map(std::vector<DailyAggregate>&& days) {
  DailyMap map;
  for (DailyAggregate& agg : days) {
    map.emplace(DailyKey{agg.chain, agg.date.days()}, std::move(agg));
  }
  return map;
}

}  // namespace

std::vector<DailyAggregate> aggregate_daily(const std::vector<ClassifiedTx>& classified,
                                            const std::vector<TransactionRecord>& txs,
                                            unsigned workers) {
  if (classified.size() != txs.size()) {
    throw DataError("aggregate_daily: classified and transaction lists differ in length");
  }
  for (size_t i = 0; i < txs.size(); ++i) {
    if (classified[i].hash != txs[i].hash) {
      throw DataError("aggregate_daily: classification order does not match transactions at " +
                      txs[i].hash.hex());
    }
  }

  if (workers == 0) workers = 1;
  workers = std::min<unsigned>(workers, std::max<size_t>(txs.size(), 1));

  std::vector<DailyMap> partials(workers);
  if (workers == 1) {
    for (size_t i = 0; i < txs.size(); ++i) add_to_map(partials[0], classified[i], txs[i]);
  } else {
    std::vector<std::thread> threads;
    const size_t chunk = (txs.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        const size_t begin = w * chunk;
        const size_t end = std::min(txs.size(), begin + chunk);
        for (size_t i = begin; i < end; ++i) add_to_map(partials[w], classified[i], txs[i]);
      });
    }
    for (auto& t : threads) t.join();
  }

  DailyMap merged = std::move(partials[0]);
  for (unsigned w = 1; w < workers; ++w) merge_maps(merged, std::move(partials[w]));
  return finalize(std::move(merged));
}

std::vector<DailyAggregate> merge_daily(std::vector<std::vector<DailyAggregate>> parts) {
  DailyMap merged;
  for (auto& part : parts) merge_maps(merged, to_map(std::move(part)));
  return finalize(std::move(merged));
}

std::vector<std::pair<Date, double>> daily_gas_series(
    const std::vector<DailyAggregate>& days, Chain chain, const std::string& category) {
  std::vector<std::pair<Date, double>> series;
  for (const DailyAggregate& agg : days) {
    if (agg.chain != chain) continue;
    auto it = agg.categories.find(category);
    const double v = it == agg.categories.end() ? 0.0 : static_cast<double>(it->second.gas_used);
    series.emplace_back(agg.date, v);
  }
  return series;
}

std::vector<std::pair<Date, double>> normalize_to_event(
    const std::vector<std::pair<Date, double>>& series, Date event_date) {
  const auto it = std::find_if(series.begin(), series.end(),
                               [&](const auto& p) { return p.first == event_date; });
  if (it == series.end()) {
    throw Error("normalize_to_event: event day " + event_date.to_string() +
                " not present in series");
  }
  if (it->second == 0.0) {
    throw Error("normalize_to_event: event-day value is zero on " + event_date.to_string());
  }
  const double base = it->second;
  std::vector<std::pair<Date, double>> out;
  out.reserve(series.size());
  for (const auto& [date, value] : series) {
    out.emplace_back(date, date == event_date ? 1.0 : value / base);
  }
  return out;
}

OutcomeDistribution outcome_distribution(const std::vector<ClassifiedTx>& classified) {
  OutcomeDistribution dist;
  for (const ClassifiedTx& c : classified) {
    if (c.purpose != Purpose::CyclicArb) continue;
    if (c.involvement == Involvement::Trade) {
      dist.trades++;
    } else if (c.involvement == Involvement::Interaction) {
      if (c.outcome == Outcome::Success) dist.interaction_success++;
      else dist.interaction_revert++;
    }
  }
  if (dist.total() == 0) {
    throw Error("outcome_distribution: no bot transactions touch a DEX");
  }
  return dist;
}

std::vector<BotStats> bot_stats_table(const std::set<Address>& bots,
                                      const std::vector<TransactionRecord>& txs,
                                      const SwapsByTx& swaps) {
  std::map<Address, BotStats> per_bot;
  std::map<Address, std::set<std::vector<uint8_t>>> calldatas;
  std::map<Address, std::vector<uint64_t>> calldata_lengths;
  for (const Address& bot : bots) per_bot[bot].contract = bot;

  for (const TransactionRecord& tx : txs) {
    if (!tx.to_addr) continue;
    auto it = per_bot.find(*tx.to_addr);
    if (it == per_bot.end()) continue;
    BotStats& stats = it->second;
    if (tx.status == TxStatus::Success) stats.non_reverted_txs++;
    else stats.reverted_txs++;
    stats.gas_used += tx.gas_used;
    auto sit = swaps.find(tx.hash);
    if (sit != swaps.end() && !sit->second.empty()) {
      stats.txs_with_trades++;
      stats.swaps += sit->second.size();
    }
    calldatas[*tx.to_addr].insert(tx.calldata);
    calldata_lengths[*tx.to_addr].push_back(tx.calldata.size() * 2);
  }

  std::vector<BotStats> table;
  table.reserve(per_bot.size());
  for (auto& [bot, stats] : per_bot) {
    const uint64_t total = stats.non_reverted_txs + stats.reverted_txs;
    const size_t unique = calldatas[bot].size();
    stats.txs_per_unique_calldata =
        unique == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(unique);
    auto& lengths = calldata_lengths[bot];
    if (!lengths.empty()) {
      std::sort(lengths.begin(), lengths.end());
      const size_t rank = (50 * lengths.size() + 99) / 100;
      stats.median_calldata_length = lengths[rank - 1];
    }
    table.push_back(stats);
  }

  std::sort(table.begin(), table.end(), [](const BotStats& a, const BotStats& b) {
    if (a.gas_used != b.gas_used) return a.gas_used > b.gas_used;
    return a.contract < b.contract;
  });

  uint64_t total_gas = 0;
  for (const BotStats& stats : table) total_gas += stats.gas_used;
  uint64_t running = 0;
  for (BotStats& stats : table) {
    running += stats.gas_used;
    stats.cumulative_gas_pct =
        total_gas == 0 ? 0.0
                       : 100.0 * static_cast<double>(running) / static_cast<double>(total_gas);
  }
  return table;
}

double RevertShareRow::cyclic_share() const {
  const uint64_t total = cyclic_reverts + other_reverts;
  return total == 0 ? 0.0 : static_cast<double>(cyclic_reverts) / static_cast<double>(total);
}

double RevertShareRow::other_share() const {
  const uint64_t total = cyclic_reverts + other_reverts;
  return total == 0 ? 0.0 : static_cast<double>(other_reverts) / static_cast<double>(total);
}

std::vector<RevertShareRow> revert_share(const std::vector<ClassifiedTx>& classified,
                                         const std::vector<TransactionRecord>& txs) {
  if (classified.size() != txs.size()) {
    throw DataError("revert_share: classified and transaction lists differ in length");
  }
  std::map<std::pair<Chain, int32_t>, RevertShareRow> rows;
  for (size_t i = 0; i < txs.size(); ++i) {
    const Date day = Date::from_timestamp(txs[i].timestamp);
    RevertShareRow& row = rows[{txs[i].chain, day.days()}];
    row.chain = txs[i].chain;
    row.date = day;
    if (classified[i].outcome != Outcome::Revert) continue;
    if (classified[i].purpose == Purpose::CyclicArb) row.cyclic_reverts++;
    else row.other_reverts++;
  }
  std::vector<RevertShareRow> out;
  out.reserve(rows.size());
  for (auto& [key, row] : rows) out.push_back(row);
  return out;
}

double single_swap_dominance(const std::vector<const TransactionRecord*>& contract_txs,
                             const SwapsByTx& swaps) {
  uint64_t trading = 0;
  uint64_t single = 0;
  for (const TransactionRecord* tx : contract_txs) {
    auto it = swaps.find(tx->hash);
    if (it == swaps.end() || it->second.empty()) continue;
    ++trading;
    if (it->second.size() == 1) ++single;
  }
  if (trading == 0) throw Error("single_swap_dominance: no trading transactions");
  return static_cast<double>(single) / static_cast<double>(trading);
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

namespace {

const CategoryAgg* find_cat(const DailyAggregate& agg, const std::string& cat) {
  auto it = agg.categories.find(cat);
  return it == agg.categories.end() ? nullptr : &it->second;
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void write_daily_gas_csv(std::ostream& out, const std::vector<DailyAggregate>& days) {
  out << "chain,date,category,tx_count,gas_used,fees_wei\n";
  for (const DailyAggregate& agg : days) {
    auto emit = [&](const std::string& cat) {
      const CategoryAgg* entry = find_cat(agg, cat);
      util::write_csv_row(out, {std::string(to_string(agg.chain)), agg.date.to_string(), cat,
                                std::to_string(entry ? entry->tx_count : 0),
                                std::to_string(entry ? entry->gas_used : 0),
                                entry ? entry->fees_wei.str() : "0"});
    };
    for (const std::string& cat : reachable_categories()) emit(cat);
    emit("cyclicArb");
    emit("other");
    emit("total");
  }
}

void write_daily_shares_csv(std::ostream& out, const std::vector<DailyAggregate>& days) {
  out << "chain,date,category,gas_share,fee_share,tx_share\n";
  for (const DailyAggregate& agg : days) {
    const CategoryAgg* total = find_cat(agg, "total");
    if (!total || total->tx_count == 0) continue;
    const double total_gas = static_cast<double>(total->gas_used);
    const double total_fees = total->fees_wei.convert_to<double>();
    const double total_txs = static_cast<double>(total->tx_count);
    auto emit = [&](const std::string& cat) {
      const CategoryAgg* entry = find_cat(agg, cat);
      const double gas = entry ? static_cast<double>(entry->gas_used) : 0.0;
      const double fees = entry ? entry->fees_wei.convert_to<double>() : 0.0;
      const double count = entry ? static_cast<double>(entry->tx_count) : 0.0;
      util::write_csv_row(out, {std::string(to_string(agg.chain)), agg.date.to_string(), cat,
                                format_double(total_gas == 0 ? 0.0 : gas / total_gas),
                                format_double(total_fees == 0 ? 0.0 : fees / total_fees),
                                format_double(count / total_txs)});
    };
    for (const std::string& cat : reachable_categories()) emit(cat);
    emit("cyclicArb");
    emit("other");
  }
}

void write_gas_price_stats_csv(std::ostream& out, const std::vector<DailyAggregate>& days) {
  out << "chain,date,category,tx_count,gas_used,fees_wei,median_gas_price_wei,"
         "mean_gas_price_wei,avg_price_per_gas_wei\n";
  for (const DailyAggregate& agg : days) {
    for (const char* cat : {"cyclicArb", "other"}) {
      const CategoryAgg* entry = find_cat(agg, cat);
      if (!entry || entry->tx_count == 0) continue;
      util::write_csv_row(out, {std::string(to_string(agg.chain)), agg.date.to_string(), cat,
                                std::to_string(entry->tx_count), std::to_string(entry->gas_used),
                                entry->fees_wei.str(), entry->median_gas_price().str(),
                                format_double(entry->mean_gas_price()),
                                format_double(entry->avg_price_per_gas())});
    }
  }
}

void write_normalized_growth_csv(
    std::ostream& out,
    const std::vector<std::tuple<Chain, std::string, std::vector<std::pair<Date, double>>>>&
        series) {
  out << "chain,category,date,gas_ratio\n";
  for (const auto& [chain, category, values] : series) {
    for (const auto& [date, value] : values) {
      util::write_csv_row(out, {std::string(to_string(chain)), category, date.to_string(),
                                format_double(value)});
    }
  }
}

void write_outcome_distribution_csv(
    std::ostream& out, const std::vector<std::pair<Chain, OutcomeDistribution>>& rows) {
  out << "chain,trade_count,interaction_success_count,interaction_revert_count,"
         "trade_frac,interaction_success_frac,interaction_revert_frac\n";
  for (const auto& [chain, dist] : rows) {
    util::write_csv_row(out, {std::string(to_string(chain)), std::to_string(dist.trades),
                              std::to_string(dist.interaction_success),
                              std::to_string(dist.interaction_revert),
                              format_double(dist.trade_frac()),
                              format_double(dist.interaction_success_frac()),
                              format_double(dist.interaction_revert_frac())});
  }
}

void write_bot_stats_csv(std::ostream& out,
                         const std::vector<std::pair<Chain, std::vector<BotStats>>>& tables) {
  out << "chain,rank,address,swaps,txs_with_trades,non_reverted_txs,reverted_txs,"
         "txs_per_unique_calldata,median_calldata_length,gas_used,cumulative_gas_pct\n";
  for (const auto& [chain, table] : tables) {
    size_t rank = 0;
    for (const BotStats& stats : table) {
      ++rank;
      util::write_csv_row(
          out, {std::string(to_string(chain)), std::to_string(rank), stats.contract.hex(),
                std::to_string(stats.swaps), std::to_string(stats.txs_with_trades),
                std::to_string(stats.non_reverted_txs), std::to_string(stats.reverted_txs),
                format_double(stats.txs_per_unique_calldata),
                std::to_string(stats.median_calldata_length), std::to_string(stats.gas_used),
                fixed2(stats.cumulative_gas_pct)});
    }
  }
}

void write_revert_share_csv(std::ostream& out, const std::vector<RevertShareRow>& rows) {
  out << "chain,date,cyclic_reverts,other_reverts,cyclic_share,other_share,no_reverts\n";
  for (const RevertShareRow& row : rows) {
    util::write_csv_row(out, {std::string(to_string(row.chain)), row.date.to_string(),
                              std::to_string(row.cyclic_reverts),
                              std::to_string(row.other_reverts),
                              format_double(row.cyclic_share()),
                              format_double(row.other_share()),
                              row.no_reverts() ? "true" : "false"});
  }
}

void write_single_swap_check_csv(
    std::ostream& out, const std::vector<std::tuple<Chain, Address, uint64_t, double>>& rows) {
  out << "chain,address,trading_txs,single_swap_fraction\n";
  for (const auto& [chain, address, trading, fraction] : rows) {
    util::write_csv_row(out, {std::string(to_string(chain)), address.hex(),
                              std::to_string(trading), format_double(fraction)});
  }
}

}  // namespace cyclarb
