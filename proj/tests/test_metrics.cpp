#include "cyclarb/metrics.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace cyclarb;
using namespace testutil;

namespace {

TransactionRecord day_tx(unsigned id, Chain chain, const char* date, uint64_t gas,
                         const BigInt& gas_price, TxStatus status = TxStatus::Success,
                         const Address& to = addr(61)) {
  auto record = tx(id, addr(900), to, int64_t{Date::parse(date).days()} * 86400 + id, gas,
                   status, chain);
  record.gas_price = gas_price;
  return record;
}

ClassifiedTx cls(const TransactionRecord& record, Purpose p, Involvement i) {
  return {record.hash, p, i,
          record.status == TxStatus::Success ? Outcome::Success : Outcome::Revert};
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("aggregate_daily: sums, shares and fees") {
  std::vector<TransactionRecord> txs = {
      day_tx(1, Chain::Base, "2025-02-01", 10, BigInt(7)),
      day_tx(2, Chain::Base, "2025-02-01", 30, BigInt(3)),
      day_tx(3, Chain::Base, "2025-02-01", 100, BigInt(5), TxStatus::Success, addr(62)),
      day_tx(4, Chain::Base, "2025-02-02", 40, BigInt(2)),
      day_tx(5, Chain::Optimism, "2025-02-01", 50, BigInt(9)),
  };
  std::vector<ClassifiedTx> classified = {
      cls(txs[0], Purpose::CyclicArb, Involvement::Trade),
      cls(txs[1], Purpose::CyclicArb, Involvement::Trade),
      cls(txs[2], Purpose::Other, Involvement::Residual),
      cls(txs[3], Purpose::CyclicArb, Involvement::Interaction),
      cls(txs[4], Purpose::Other, Involvement::Trade),
  };
  const auto days = aggregate_daily(classified, txs);
  REQUIRE(days.size() == 3);  // (base, 2-01), (base, 2-02), (optimism, 2-01)

  const DailyAggregate& base_day1 = days[0];
  CHECK(base_day1.chain == Chain::Base);
  CHECK(base_day1.date == Date::parse("2025-02-01"));
  const CategoryAgg& trades = base_day1.categories.at("cyclicArb-trade-success");
  CHECK(trades.tx_count == 2);
  CHECK(trades.gas_used == 40);  // 10 + 30
  CHECK(trades.fees_wei == BigInt(10 * 7 + 30 * 3));
  CHECK(base_day1.categories.at("total").gas_used == 140);
  CHECK(base_day1.categories.at("cyclicArb").gas_used == 40);
  CHECK(base_day1.categories.at("other").gas_used == 100);

  SUBCASE("fees: gas 100 at price 5 is 500 wei") {
    CHECK(base_day1.categories.at("other-residual-success").fees_wei == BigInt(500));
  }
  SUBCASE("category sums equal day totals") {
    for (const DailyAggregate& agg : days) {
      uint64_t gas = 0, count = 0;
      BigInt fees = 0;
      for (const std::string& cat : reachable_categories()) {
        auto it = agg.categories.find(cat);
        if (it == agg.categories.end()) continue;
        gas += it->second.gas_used;
        count += it->second.tx_count;
        fees += it->second.fees_wei;
      }
      CHECK(gas == agg.categories.at("total").gas_used);
      CHECK(count == agg.categories.at("total").tx_count);
      CHECK(fees == agg.categories.at("total").fees_wei);
    }
  }
  SUBCASE("median and means") {
    CHECK(trades.median_gas_price() == BigInt(3));  // nearest rank of {3,7} is rank 1
    CHECK(trades.mean_gas_price() == doctest::Approx(5.0));
    CHECK(trades.avg_price_per_gas() == doctest::Approx(160.0 / 40.0));
  }
}

TEST_CASE("aggregate_daily: partitioned merge equals single pass") {
  std::mt19937_64 rng(8);
  std::vector<TransactionRecord> txs;
  std::vector<ClassifiedTx> classified;
  const char* dates[] = {"2025-02-01", "2025-02-02", "2025-02-03"};
  for (unsigned i = 1; i <= 200; ++i) {
    const Chain chain = kAllChains[rng() % 4];
    const auto status = rng() % 5 ? TxStatus::Success : TxStatus::Revert;
    auto record = day_tx(i, chain, dates[rng() % 3], 1 + rng() % 100'000,
                         BigInt(static_cast<uint64_t>(rng() % 1'000'000)), status);
    const Purpose p = rng() % 2 ? Purpose::CyclicArb : Purpose::Other;
    Involvement inv = static_cast<Involvement>(rng() % 3);
    if (status == TxStatus::Revert && inv == Involvement::Trade) inv = Involvement::Interaction;
    classified.push_back(cls(record, p, inv));
    txs.push_back(std::move(record));
  }
  const auto whole = aggregate_daily(classified, txs, 1);
  const auto parallel = aggregate_daily(classified, txs, 4);

  auto equal = [](const std::vector<DailyAggregate>& a, const std::vector<DailyAggregate>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i].chain != b[i].chain || !(a[i].date == b[i].date)) return false;
      if (a[i].categories.size() != b[i].categories.size()) return false;
      for (const auto& [cat, agg] : a[i].categories) {
        const auto& other = b[i].categories.at(cat);
        if (agg.tx_count != other.tx_count || agg.gas_used != other.gas_used ||
            agg.fees_wei != other.fees_wei || agg.gas_prices != other.gas_prices) {
          return false;
        }
      }
    }
    return true;
  };
  CHECK(equal(whole, parallel));

  // explicit split-and-merge over an arbitrary partition point
  const size_t cut = 73;
  std::vector<TransactionRecord> txs_a(txs.begin(), txs.begin() + cut);
  std::vector<TransactionRecord> txs_b(txs.begin() + cut, txs.end());
  std::vector<ClassifiedTx> cls_a(classified.begin(), classified.begin() + cut);
  std::vector<ClassifiedTx> cls_b(classified.begin() + cut, classified.end());
  const auto merged =
      merge_daily({aggregate_daily(cls_a, txs_a), aggregate_daily(cls_b, txs_b)});
  CHECK(equal(whole, merged));
}

TEST_CASE("normalize_to_event") {
  const Date d1 = Date::parse("2025-02-01"), d2 = Date::parse("2025-02-02"),
             d3 = Date::parse("2025-02-03");
  SUBCASE("values divide by the event-day value") {
    const auto out = normalize_to_event({{d1, 5}, {d2, 10}, {d3, 20}}, d1);
    CHECK(out[0].second == 1.0);  // exactly
    CHECK(out[1].second == doctest::Approx(2.0));
    CHECK(out[2].second == doctest::Approx(4.0));
  }
  SUBCASE("event day itself is exactly 1.0 even with awkward values") {
    const auto out = normalize_to_event({{d1, 0.1234567}, {d2, 3.3}}, d1);
    CHECK(out[0].second == 1.0);
  }
  SUBCASE("zero or missing event value errors") {
    CHECK_THROWS_AS(normalize_to_event({{d1, 0}, {d2, 3}}, d1), Error);
    CHECK_THROWS_AS(normalize_to_event({{d2, 3}}, d1), Error);
  }
}

TEST_CASE("outcome_distribution") {
  auto make = [](Purpose p, Involvement i, Outcome o) {
    return ClassifiedTx{hash(1), p, i, o};
  };
  SUBCASE("1 trade, 1 interaction-success, 2 interaction-revert") {
    const std::vector<ClassifiedTx> classified = {
        make(Purpose::CyclicArb, Involvement::Trade, Outcome::Success),
        make(Purpose::CyclicArb, Involvement::Interaction, Outcome::Success),
        make(Purpose::CyclicArb, Involvement::Interaction, Outcome::Revert),
        make(Purpose::CyclicArb, Involvement::Interaction, Outcome::Revert),
        make(Purpose::Other, Involvement::Trade, Outcome::Success),      // out of scope
        make(Purpose::CyclicArb, Involvement::Residual, Outcome::Success),  // out of scope
    };
    const OutcomeDistribution dist = outcome_distribution(classified);
    CHECK(dist.trade_frac() == doctest::Approx(0.25));
    CHECK(dist.interaction_success_frac() == doctest::Approx(0.25));
    CHECK(dist.interaction_revert_frac() == doctest::Approx(0.5));
    CHECK(dist.trade_frac() + dist.interaction_success_frac() +
              dist.interaction_revert_frac() ==
          doctest::Approx(1.0));
  }
  SUBCASE("all trades") {
    const std::vector<ClassifiedTx> classified = {
        make(Purpose::CyclicArb, Involvement::Trade, Outcome::Success),
        make(Purpose::CyclicArb, Involvement::Trade, Outcome::Success),
    };
    const OutcomeDistribution dist = outcome_distribution(classified);
    CHECK(dist.trade_frac() == 1.0);
    CHECK(dist.interaction_success_frac() == 0.0);
  }
  SUBCASE("engineered 52.6% trade mix reproduces its fraction") {
    // 526 trades out of 1000 in-scope transactions
    std::vector<ClassifiedTx> classified;
    for (int i = 0; i < 526; ++i) {
      classified.push_back(make(Purpose::CyclicArb, Involvement::Trade, Outcome::Success));
    }
    for (int i = 0; i < 300; ++i) {
      classified.push_back(
          make(Purpose::CyclicArb, Involvement::Interaction, Outcome::Success));
    }
    for (int i = 0; i < 174; ++i) {
      classified.push_back(make(Purpose::CyclicArb, Involvement::Interaction, Outcome::Revert));
    }
    const OutcomeDistribution dist = outcome_distribution(classified);
    CHECK(dist.trade_frac() == doctest::Approx(0.526));
    CHECK(dist.total() == 1000);
  }
  SUBCASE("empty scope errors") {
    CHECK_THROWS_AS(
        outcome_distribution({make(Purpose::Other, Involvement::Trade, Outcome::Success)}),
        Error);
  }
}

TEST_CASE("bot_stats_table") {
  const Address bot = addr(60);
  const std::set<Address> bots = {bot};
  std::vector<TransactionRecord> txs;
  SwapsByTx swaps_by_tx;

  SUBCASE("ten txs over five unique calldata payloads give ratio 2.0") {
    for (unsigned i = 1; i <= 10; ++i) {
      auto record = day_tx(i, Chain::Base, "2025-02-01", 1000 * i, BigInt(1));
      record.to_addr = bot;
      record.calldata = {static_cast<uint8_t>(i % 5)};
      txs.push_back(record);
    }
    const auto table = bot_stats_table(bots, txs, swaps_by_tx);
    REQUIRE(table.size() == 1);
    CHECK(table[0].txs_per_unique_calldata == doctest::Approx(2.0));
    CHECK(table[0].non_reverted_txs == 10);
    CHECK(table[0].cumulative_gas_pct == doctest::Approx(100.0));
  }
  SUBCASE("calldata 0x0001 counts 4 hex chars") {
    auto record = day_tx(1, Chain::Base, "2025-02-01", 1000, BigInt(1));
    record.to_addr = bot;
    record.calldata = parse_hex_bytes("0x0001");
    txs.push_back(record);
    const auto table = bot_stats_table(bots, txs, swaps_by_tx);
    CHECK(table[0].median_calldata_length == 4);
  }
  SUBCASE("table-parity ratio 107.08 from 10708 txs over 100 payloads") {
    for (unsigned i = 1; i <= 10708; ++i) {
      auto record = day_tx(i, Chain::Base, "2025-02-01", 100, BigInt(1));
      record.to_addr = bot;
      record.calldata = {static_cast<uint8_t>(i % 100), 0x01};
      txs.push_back(record);
    }
    const auto table = bot_stats_table(bots, txs, swaps_by_tx);
    CHECK(table[0].txs_per_unique_calldata == doctest::Approx(107.08));
  }
  SUBCASE("ranking by gas with monotone cumulative percentage") {
    const Address bot2 = addr(61), bot3 = addr(62);
    const std::set<Address> three = {bot, bot2, bot3};
    unsigned id = 1;
    auto add = [&](const Address& b, uint64_t gas, unsigned swap_count) {
      auto record = day_tx(id, Chain::Base, "2025-02-01", gas, BigInt(1));
      record.to_addr = b;
      if (swap_count > 0) {
        for (unsigned s = 0; s < swap_count; ++s) {
          swaps_by_tx[record.hash].push_back(swap(id, addr(10), addr(11), 5, 6, s));
        }
      }
      txs.push_back(record);
      ++id;
    };
    add(bot, 500, 2);
    add(bot2, 2000, 3);
    add(bot3, 1000, 0);
    const auto table = bot_stats_table(three, txs, swaps_by_tx);
    REQUIRE(table.size() == 3);
    CHECK(table[0].contract == bot2);
    CHECK(table[1].contract == bot3);
    CHECK(table[2].contract == bot);
    CHECK(table[0].cumulative_gas_pct <= table[1].cumulative_gas_pct);
    CHECK(table[1].cumulative_gas_pct <= table[2].cumulative_gas_pct);
    CHECK(table[2].cumulative_gas_pct == doctest::Approx(100.0));
    CHECK(table[0].swaps == 3);
    CHECK(table[0].txs_with_trades == 1);
    CHECK(table[1].txs_with_trades == 0);
  }
}

TEST_CASE("revert_share") {
  std::vector<TransactionRecord> txs = {
      day_tx(1, Chain::Base, "2025-02-01", 10, BigInt(1), TxStatus::Revert),
      day_tx(2, Chain::Base, "2025-02-01", 10, BigInt(1), TxStatus::Revert),
      day_tx(3, Chain::Base, "2025-02-01", 10, BigInt(1), TxStatus::Revert),
      day_tx(4, Chain::Base, "2025-02-01", 10, BigInt(1), TxStatus::Revert),
      day_tx(5, Chain::Base, "2025-02-01", 10, BigInt(1)),
      day_tx(6, Chain::Base, "2025-02-02", 10, BigInt(1)),
  };
  std::vector<ClassifiedTx> classified = {
      cls(txs[0], Purpose::CyclicArb, Involvement::Interaction),
      cls(txs[1], Purpose::Other, Involvement::Residual),
      cls(txs[2], Purpose::Other, Involvement::Residual),
      cls(txs[3], Purpose::Other, Involvement::Interaction),
      cls(txs[4], Purpose::Other, Involvement::Trade),
      cls(txs[5], Purpose::Other, Involvement::Trade),
  };
  const auto rows = revert_share(classified, txs);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].cyclic_share() == doctest::Approx(0.25));  // 1 of 4 reverts from the bot
  CHECK(rows[0].other_share() == doctest::Approx(0.75));
  CHECK_FALSE(rows[0].no_reverts());
  CHECK(rows[1].no_reverts());  // flagged: day without reverts
  CHECK(rows[1].cyclic_share() == 0.0);
  CHECK(rows[1].other_share() == 0.0);
}

TEST_CASE("single_swap_dominance") {
  std::vector<TransactionRecord> txs;
  SwapsByTx swaps_by_tx;
  std::vector<const TransactionRecord*> contract_txs;
  auto add = [&](unsigned id, unsigned swap_count) {
    txs.push_back(day_tx(id, Chain::Base, "2025-02-01", 10, BigInt(1)));
    for (unsigned s = 0; s < swap_count; ++s) {
      swaps_by_tx[hash(id)].push_back(swap(id, addr(10), addr(11), 5, 6, s));
    }
  };
  SUBCASE("98 of 100 single-swap txs give 0.98") {
    for (unsigned i = 1; i <= 98; ++i) add(i, 1);
    add(99, 2);
    add(100, 3);
    for (const auto& t : txs) contract_txs.push_back(&t);
    CHECK(single_swap_dominance(contract_txs, swaps_by_tx) == doctest::Approx(0.98));
  }
  SUBCASE("all multi-swap gives 0.0") {
    for (unsigned i = 1; i <= 5; ++i) add(i, 2);
    for (const auto& t : txs) contract_txs.push_back(&t);
    CHECK(single_swap_dominance(contract_txs, swaps_by_tx) == 0.0);
  }
  SUBCASE("a single one-swap tx gives 1.0") {
    add(1, 1);
    for (const auto& t : txs) contract_txs.push_back(&t);
    CHECK(single_swap_dominance(contract_txs, swaps_by_tx) == 1.0);
  }
  SUBCASE("no trading txs errors") {
    add(1, 0);
    for (const auto& t : txs) contract_txs.push_back(&t);
    CHECK_THROWS_AS(single_swap_dominance(contract_txs, swaps_by_tx), Error);
  }
}

}  // TEST_SUITE
