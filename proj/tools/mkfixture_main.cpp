// Synthetic chain-data fixture generator. Plants cyclic-arbitrage bots,
// router-fronted decoys and a single-swap decoy across four chains, plus
// retail background traffic, and records the ground truth alongside the
// generated files so tests can compare pipeline output against what was
// planted without running the pipeline itself.

#include "cyclarb/ingest.hpp"
#include "cyclarb/metrics.hpp"
#include "cyclarb/types.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>

using namespace cyclarb;
namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(uint64_t seed) : engine(seed) {}
  uint64_t uniform(uint64_t lo, uint64_t hi) {  // inclusive
    return std::uniform_int_distribution<uint64_t>(lo, hi)(engine);
  }
  double real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine);
  }
};

Address make_addr(unsigned category, unsigned chain_idx, uint64_t index) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "0x%02x%02x%036llx", category & 0xff, chain_idx & 0xff,
                static_cast<unsigned long long>(index));
  return Address::parse(buf);
}

TxHash make_hash(unsigned chain_idx, uint64_t counter) {
  char buf[72];
  std::snprintf(buf, sizeof buf, "0x%02x%062llx", chain_idx & 0xff,
                static_cast<unsigned long long>(counter));
  return TxHash::parse(buf);
}

constexpr unsigned kCatToken = 0xaa;
constexpr unsigned kCatPool = 0xbb;
constexpr unsigned kCatRouter = 0xcc;
constexpr unsigned kCatAggregator = 0xdd;
constexpr unsigned kCatBot = 0xb0;
constexpr unsigned kCatDecoy = 0xde;
constexpr unsigned kCatRetailContract = 0xee;
constexpr unsigned kCatMisc = 0xef;
constexpr unsigned kCatEoa = 0xe0;
constexpr unsigned kCatExtra = 0xf0;

struct BotTruth {
  uint64_t txs = 0;
  std::set<std::vector<uint8_t>> calldatas;
  uint64_t txs_with_trades = 0;
  uint64_t swaps = 0;
  uint64_t gas = 0;
};

struct ChainTruth {
  std::vector<Address> bots;
  std::vector<Address> expected_candidates;
  std::map<std::string, uint64_t> cell_counts;
  std::map<std::string, uint64_t> daily_total_gas;  // date -> gas
  std::map<Address, BotTruth> bot_stats;
};

struct ChainBuilder {
  Chain chain;
  unsigned idx;
  Rng rng;
  uint64_t hash_counter = 0;
  uint64_t block_number = 1'000'000;

  std::vector<TransactionRecord> txs;
  SwapsByTx swaps;
  TracesByTx traces;
  LabelSet labels;
  ChainTruth truth;

  std::vector<Address> tokens, pools, routers, aggregators, eoas;

  ChainBuilder(Chain c, unsigned i, uint64_t seed) : chain(c), idx(i), rng(seed ^ (i + 1)) {
    for (uint64_t t = 0; t < 6; ++t) tokens.push_back(make_addr(kCatToken, idx, t));
    for (uint64_t p = 0; p < 12; ++p) pools.push_back(make_addr(kCatPool, idx, p));
    for (uint64_t r = 0; r < 2; ++r) routers.push_back(make_addr(kCatRouter, idx, r));
    for (uint64_t a = 0; a < 2; ++a) aggregators.push_back(make_addr(kCatAggregator, idx, a));
    for (uint64_t e = 0; e < 12; ++e) eoas.push_back(make_addr(kCatEoa, idx, e));
    labels.routers.insert(routers.begin(), routers.end());
    labels.aggregators.insert(aggregators.begin(), aggregators.end());
    labels.dex_pools.insert(pools.begin(), pools.end());
  }

  TxHash next_hash() { return make_hash(idx, ++hash_counter); }

  /// Records a transaction and updates generator-side truth tallies.
  /// `purpose_is_bot` reflects the *final* bot set (the single-swap decoy
  /// counts as other).
  TxHash add_tx(const Address& from, const std::optional<Address>& to, int64_t ts,
                uint64_t gas, const std::string& calldata_hex, TxStatus status,
                Involvement involvement, bool purpose_is_bot) {
    TransactionRecord tx;
    tx.hash = next_hash();
    tx.from_addr = from;
    tx.to_addr = to;
    tx.block_number = block_number++;
    tx.timestamp = ts;
    tx.gas_used = gas;
    tx.gas_price = BigInt(rng.uniform(1'000'000, 90'000'000));  // ~0.001-0.09 gwei
    tx.calldata = parse_hex_bytes(calldata_hex);
    tx.status = status;
    tx.chain = chain;
    txs.push_back(tx);

    const Purpose purpose = purpose_is_bot ? Purpose::CyclicArb : Purpose::Other;
    const Outcome outcome = status == TxStatus::Success ? Outcome::Success : Outcome::Revert;
    truth.cell_counts[category_key(purpose, involvement, outcome)]++;
    truth.daily_total_gas[Date::from_timestamp(ts).to_string()] += gas;

    if (to && truth.bot_stats.count(*to)) {
      BotTruth& bt = truth.bot_stats[*to];
      bt.txs++;
      bt.calldatas.insert(tx.calldata);
      bt.gas += gas;
    }
    return tx.hash;
  }

  void add_trace_probe(const TxHash& hash, unsigned pool_calls, bool touch_pool) {
    static const std::string slot0 = "0x3850c7bd";
    static const std::string get_reserves = "0x0902f1ac";
    auto& group = traces[hash];
    for (unsigned i = 0; i < pool_calls; ++i) {
      TraceCall call;
      call.tx_hash = hash;
      call.call_type = CallType::StaticCall;
      call.callee = touch_pool ? pools[rng.uniform(0, pools.size() - 1)]
                               : make_addr(kCatMisc, idx, rng.uniform(0, 5));
      call.selector = parse_hex_bytes(rng.uniform(0, 1) ? slot0 : get_reserves);
      call.depth_order = i;
      group.push_back(call);
    }
  }

  /// Cyclic, profitable swap chain over k distinct tokens.
  void add_cyclic_swaps(const TxHash& hash, unsigned k) {
    std::vector<Address> path;
    std::set<size_t> used;
    while (path.size() < k) {
      const size_t t = rng.uniform(0, tokens.size() - 1);
      if (used.insert(t).second) path.push_back(tokens[t]);
    }
    std::vector<BigInt> amounts;
    for (unsigned j = 0; j < k; ++j) {
      amounts.push_back(BigInt(rng.uniform(1'000'000, 999'999'999)) * BigInt("1000000000000"));
    }
    const BigInt gain = BigInt(rng.uniform(1'000, 999'999)) * BigInt("1000000000");
    auto& group = swaps[hash];
    for (unsigned j = 0; j < k; ++j) {
      SwapEvent ev;
      ev.tx_hash = hash;
      ev.token_sold = path[j];
      ev.token_bought = path[(j + 1) % k];
      ev.amount_sold = amounts[j];
      ev.amount_bought = j + 1 == k ? amounts[0] + gain : amounts[j + 1];
      ev.evt_index = static_cast<uint32_t>(j * 10 + rng.uniform(0, 9));
      group.push_back(ev);
    }
  }

  /// Non-cyclic retail swaps: a single hop or an open two-hop chain.
  void add_retail_swaps(const TxHash& hash, unsigned hops) {
    std::vector<Address> path;
    std::set<size_t> used;
    while (path.size() < hops + 1) {
      const size_t t = rng.uniform(0, tokens.size() - 1);
      if (used.insert(t).second) path.push_back(tokens[t]);
    }
    auto& group = swaps[hash];
    for (unsigned j = 0; j < hops; ++j) {
      SwapEvent ev;
      ev.tx_hash = hash;
      ev.token_sold = path[j];
      ev.token_bought = path[j + 1];
      ev.amount_sold = BigInt(rng.uniform(1'000'000, 999'999'999)) * BigInt("1000000000000");
      ev.amount_bought = BigInt(rng.uniform(1'000'000, 999'999'999)) * BigInt("1000000000000");
      ev.evt_index = static_cast<uint32_t>(j * 10 + rng.uniform(0, 9));
      group.push_back(ev);
    }
  }

  void note_trading_tx(const Address& bot, unsigned swap_count) {
    BotTruth& bt = truth.bot_stats[bot];
    bt.txs_with_trades++;
    bt.swaps += swap_count;
  }
};

std::string random_calldata(Rng& rng, unsigned bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out = "0x";
  for (unsigned i = 0; i < bytes * 2; ++i) out += digits[rng.uniform(0, 15)];
  return out;
}

std::vector<uint8_t> synth_bytecode(Rng& rng, size_t target_len) {
  // Plausible instruction mix; PUSH operands are consumed like real code.
  static constexpr uint8_t plain_ops[] = {0x01, 0x02, 0x03, 0x10, 0x14, 0x15, 0x16, 0x1b,
                                          0x35, 0x36, 0x50, 0x51, 0x52, 0x54, 0x56, 0x57,
                                          0x5b, 0x80, 0x81, 0x90, 0x91, 0xf3, 0xfa, 0xfd};
  std::vector<uint8_t> code;
  code.reserve(target_len + 33);
  while (code.size() < target_len) {
    const uint64_t pick = rng.uniform(0, 99);
    if (pick < 35) {
      const unsigned operands = static_cast<unsigned>(rng.uniform(1, 4));
      code.push_back(static_cast<uint8_t>(0x60 + operands - 1));  // PUSH1..PUSH4
      for (unsigned i = 0; i < operands; ++i) {
        code.push_back(static_cast<uint8_t>(rng.uniform(0, 255)));
      }
    } else {
      code.push_back(plain_ops[rng.uniform(0, std::size(plain_ops) - 1)]);
    }
  }
  code.push_back(0x00);  // STOP
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic multi-chain fixture with planted bots"};
  std::string out_dir;
  unsigned days = 3;
  uint64_t seed = 42;
  std::string start_str = "2025-02-01";
  std::string event_str;
  app.add_option("-o,--out", out_dir, "output directory")->required();
  app.add_option("-d,--days", days, "number of calendar days")->check(CLI::Range(1u, 400u));
  app.add_option("-s,--seed", seed, "rng seed");
  app.add_option("--start", start_str, "first day (YYYY-MM-DD)");
  app.add_option("--event-date", event_str, "growth-normalization anchor day");
  CLI11_PARSE(app, argc, argv);

  const Date start = Date::parse(start_str);
  const Date event_date =
      event_str.empty() ? Date(start.days() + std::min<int32_t>(1, static_cast<int32_t>(days) - 1))
                        : Date::parse(event_str);

  fs::create_directories(out_dir);

  std::vector<ChainBuilder> builders;
  builders.reserve(kAllChains.size());
  for (unsigned i = 0; i < kAllChains.size(); ++i) {
    builders.emplace_back(kAllChains[i], i, seed);
  }

  // Bot placement: two on base, one on each other chain.
  struct BotPlan {
    unsigned chain_idx;
    uint64_t bot_id;
    unsigned slot;  // intra-day time slot
  };
  const std::vector<BotPlan> bot_plans = {
      {2, 0, 0}, {2, 1, 1},  // base
      {3, 2, 0},             // optimism
      {1, 3, 0},             // arbitrum
      {0, 4, 0},             // ethereum
  };
  for (const BotPlan& plan : bot_plans) {
    ChainBuilder& cb = builders[plan.chain_idx];
    const Address bot = make_addr(kCatBot, plan.chain_idx, plan.bot_id);
    cb.truth.bots.push_back(bot);
    cb.truth.bot_stats[bot];  // reserve a stats slot so add_tx tallies it
  }

  const Address single_swap_decoy = make_addr(kCatDecoy, 2, 0);
  builders[2].truth.bot_stats[single_swap_decoy];

  for (ChainBuilder& cb : builders) {
    const bool is_ethereum = cb.chain == Chain::Ethereum;

    for (unsigned d = 0; d < days; ++d) {
      const int64_t day_start =
          (static_cast<int64_t>(start.days()) + static_cast<int64_t>(d)) * 86400;

      // --- planted bots ---
      for (const BotPlan& plan : bot_plans) {
        if (plan.chain_idx != cb.idx) continue;
        const Address bot = make_addr(kCatBot, plan.chain_idx, plan.bot_id);
        const Address eoa_a = make_addr(kCatEoa, cb.idx, 100 + plan.bot_id * 2);
        const Address eoa_b = make_addr(kCatEoa, cb.idx, 101 + plan.bot_id * 2);
        int64_t ts = day_start + 600 + plan.slot * 7200;
        const std::vector<std::string> payloads = {"0x0001", "0x00013748",
                                                   "0x0001374800aabbcc"};

        const unsigned trades =
            is_ethereum ? static_cast<unsigned>(cb.rng.uniform(8, 12))
                        : static_cast<unsigned>(cb.rng.uniform(6, 10));
        for (unsigned i = 0; i < trades; ++i) {
          ts += static_cast<int64_t>(cb.rng.uniform(2, 7));
          const unsigned k = cb.rng.uniform(0, 1) ? 2 : 3;
          const TxHash hash = cb.add_tx(
              cb.rng.uniform(0, 1) ? eoa_a : eoa_b, bot, ts, cb.rng.uniform(180'000, 450'000),
              payloads[cb.rng.uniform(0, payloads.size() - 1)], TxStatus::Success,
              Involvement::Trade, true);
          cb.add_cyclic_swaps(hash, k);
          cb.add_trace_probe(hash, 2, true);
          cb.note_trading_tx(bot, k);
        }

        const unsigned probes =
            is_ethereum ? static_cast<unsigned>(cb.rng.uniform(3, 5))
                        : static_cast<unsigned>(cb.rng.uniform(16, 24));
        for (unsigned i = 0; i < probes; ++i) {
          ts += static_cast<int64_t>(cb.rng.uniform(2, 7));
          const TxHash hash =
              cb.add_tx(cb.rng.uniform(0, 1) ? eoa_a : eoa_b, bot, ts,
                        cb.rng.uniform(120'000, 300'000), "0x0001", TxStatus::Success,
                        Involvement::Interaction, true);
          cb.add_trace_probe(hash, static_cast<unsigned>(cb.rng.uniform(2, 5)), true);
        }

        const unsigned reverts = is_ethereum ? (d == 0 ? 1 : 0) : 2;
        for (unsigned i = 0; i < reverts; ++i) {
          ts += static_cast<int64_t>(cb.rng.uniform(2, 7));
          const TxHash hash =
              cb.add_tx(eoa_a, bot, ts, cb.rng.uniform(90'000, 250'000), "0x0002",
                        TxStatus::Revert, Involvement::Interaction, true);
          cb.add_trace_probe(hash, 2, true);
        }

        // the occasional swap-less, pool-less call (maintenance and such)
        ts += static_cast<int64_t>(cb.rng.uniform(2, 7));
        const TxHash residual =
            cb.add_tx(eoa_a, bot, ts, cb.rng.uniform(40'000, 90'000), "0x", TxStatus::Success,
                      Involvement::Residual, true);
        cb.add_trace_probe(residual, 1, false);
        if (d == 0) {
          ts += static_cast<int64_t>(cb.rng.uniform(2, 7));
          const TxHash hash = cb.add_tx(eoa_b, bot, ts, cb.rng.uniform(40'000, 90'000), "0x",
                                        TxStatus::Revert, Involvement::Residual, true);
          cb.add_trace_probe(hash, 1, false);
        }
      }

      // --- router-fronted decoys (base and optimism) ---
      if (cb.idx == 2 || cb.idx == 3) {
        const Address eoa = make_addr(kCatEoa, cb.idx, 200);
        int64_t ts = day_start + 20'000;
        const unsigned count = static_cast<unsigned>(cb.rng.uniform(4, 8));
        for (unsigned i = 0; i < count; ++i) {
          ts += static_cast<int64_t>(cb.rng.uniform(30, 120));
          const TxHash hash = cb.add_tx(eoa, cb.routers[0], ts,
                                        cb.rng.uniform(250'000, 500'000),
                                        random_calldata(cb.rng, 68), TxStatus::Success,
                                        Involvement::Trade, false);
          cb.add_cyclic_swaps(hash, 2);  // cyclic swaps, but the callee is a router
        }
      }

      // --- single-swap decoy (base): utility contract with one stray cycle ---
      if (cb.idx == 2) {
        const Address eoa_a = make_addr(kCatEoa, cb.idx, 210);
        const Address eoa_b = make_addr(kCatEoa, cb.idx, 211);
        int64_t ts = day_start + 30'000;
        for (unsigned i = 0; i < 10; ++i) {
          ts += static_cast<int64_t>(cb.rng.uniform(3, 9));
          const TxHash hash = cb.add_tx(cb.rng.uniform(0, 1) ? eoa_a : eoa_b,
                                        single_swap_decoy, ts, 2'000'000,
                                        random_calldata(cb.rng, 4), TxStatus::Success,
                                        Involvement::Trade, false);
          cb.add_retail_swaps(hash, 1);
          cb.note_trading_tx(single_swap_decoy, 1);
        }
        if (d == std::min(1u, days - 1)) {
          ts += 5;
          const TxHash hash =
              cb.add_tx(eoa_a, single_swap_decoy, ts, 600'000, random_calldata(cb.rng, 4),
                        TxStatus::Success, Involvement::Trade, false);
          cb.add_cyclic_swaps(hash, 2);
          cb.note_trading_tx(single_swap_decoy, 2);
        }
      }

      // --- retail background ---
      int64_t ts = day_start + 40'000;
      auto retail_eoa = [&] { return cb.eoas[cb.rng.uniform(0, cb.eoas.size() - 1)]; };
      auto step = [&] { ts += static_cast<int64_t>(cb.rng.uniform(60, 500)); return ts; };

      const unsigned router_trades = static_cast<unsigned>(cb.rng.uniform(14, 26));
      for (unsigned i = 0; i < router_trades; ++i) {
        const TxHash hash = cb.add_tx(retail_eoa(), cb.routers[cb.rng.uniform(0, 1)], step(),
                                      cb.rng.uniform(90'000, 350'000),
                                      random_calldata(cb.rng, 68), TxStatus::Success,
                                      Involvement::Trade, false);
        cb.add_retail_swaps(hash, static_cast<unsigned>(cb.rng.uniform(1, 2)));
      }

      const unsigned agg_trades = static_cast<unsigned>(cb.rng.uniform(3, 9));
      for (unsigned i = 0; i < agg_trades; ++i) {
        const TxHash hash = cb.add_tx(retail_eoa(), cb.aggregators[cb.rng.uniform(0, 1)],
                                      step(), cb.rng.uniform(120'000, 400'000),
                                      random_calldata(cb.rng, 100), TxStatus::Success,
                                      Involvement::Trade, false);
        cb.add_retail_swaps(hash, static_cast<unsigned>(cb.rng.uniform(1, 2)));
      }

      const unsigned pool_trades = static_cast<unsigned>(cb.rng.uniform(2, 6));
      for (unsigned i = 0; i < pool_trades; ++i) {
        const TxHash hash = cb.add_tx(retail_eoa(), cb.pools[cb.rng.uniform(0, 3)], step(),
                                      cb.rng.uniform(80'000, 200'000),
                                      random_calldata(cb.rng, 68), TxStatus::Success,
                                      Involvement::Trade, false);
        cb.add_retail_swaps(hash, 1);
      }

      const unsigned interactions = static_cast<unsigned>(cb.rng.uniform(4, 7));
      for (unsigned i = 0; i < interactions; ++i) {
        const TxHash hash = cb.add_tx(retail_eoa(), make_addr(kCatRetailContract, cb.idx, 0),
                                      step(), cb.rng.uniform(60'000, 150'000),
                                      random_calldata(cb.rng, 36), TxStatus::Success,
                                      Involvement::Interaction, false);
        cb.add_trace_probe(hash, 2, true);
      }
      for (unsigned i = 0; i < 2; ++i) {
        const TxHash hash = cb.add_tx(retail_eoa(), make_addr(kCatRetailContract, cb.idx, 0),
                                      step(), cb.rng.uniform(60'000, 150'000),
                                      random_calldata(cb.rng, 36), TxStatus::Revert,
                                      Involvement::Interaction, false);
        cb.add_trace_probe(hash, 2, true);
      }

      const unsigned residuals = static_cast<unsigned>(cb.rng.uniform(4, 8));
      for (unsigned i = 0; i < residuals; ++i) {
        const TxHash hash = cb.add_tx(retail_eoa(), make_addr(kCatMisc, cb.idx, 1), step(),
                                      cb.rng.uniform(21'000, 60'000), "0x", TxStatus::Success,
                                      Involvement::Residual, false);
        if (i % 2 == 0) cb.add_trace_probe(hash, 1, false);  // others lack trace data
      }
      for (unsigned i = 0; i < 2; ++i) {
        cb.add_tx(retail_eoa(), make_addr(kCatMisc, cb.idx, 1), step(),
                  cb.rng.uniform(21'000, 60'000), "0x", TxStatus::Revert,
                  Involvement::Residual, false);
      }
    }

    // Every planted bot plus (on base) the single-swap decoy must surface
    // as a detection candidate.
    cb.truth.expected_candidates = cb.truth.bots;
    if (cb.idx == 2) cb.truth.expected_candidates.push_back(single_swap_decoy);
    std::sort(cb.truth.expected_candidates.begin(), cb.truth.expected_candidates.end());
  }

  // --- OHLC price series (shared; L1 ETH price) ---
  Rng price_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<OhlcBar> ohlc;
  double close = 2500.0;
  for (unsigned d = 0; d < days; ++d) {
    OhlcBar bar;
    bar.date = Date(start.days() + static_cast<int32_t>(d));
    bar.open = close;
    close = bar.open * (1.0 + price_rng.real(-0.05, 0.05));
    bar.close = close;
    bar.high = std::max(bar.open, bar.close) * (1.0 + price_rng.real(0.0, 0.025));
    bar.low = std::min(bar.open, bar.close) * (1.0 - price_rng.real(0.0, 0.025));
    ohlc.push_back(bar);
  }

  // --- bot bytecodes: one clone pair on base, one mutated sibling, plus
  // unrelated contracts and one self-destructed (empty) entry ---
  Rng code_rng(seed ^ 0xc2b2ae3d27d4eb4fULL);
  std::vector<ContractBytecode> bytecodes;
  const std::vector<uint8_t> base_code = synth_bytecode(code_rng, 900);
  bytecodes.push_back({make_addr(kCatBot, 2, 0), base_code});
  bytecodes.push_back({make_addr(kCatBot, 2, 1), base_code});  // exact clone
  std::vector<uint8_t> mutated = base_code;
  const std::vector<uint8_t> tail = synth_bytecode(code_rng, 40);
  mutated.insert(mutated.end(), tail.begin(), tail.end());
  bytecodes.push_back({make_addr(kCatBot, 3, 2), mutated});
  bytecodes.push_back({make_addr(kCatBot, 1, 3), synth_bytecode(code_rng, 700)});
  bytecodes.push_back({make_addr(kCatBot, 0, 4), synth_bytecode(code_rng, 1100)});
  for (uint64_t x = 0; x < 3; ++x) {
    bytecodes.push_back({make_addr(kCatExtra, 0, x), synth_bytecode(code_rng, 400 + 130 * x)});
  }
  bytecodes.push_back({make_addr(kCatExtra, 0, 99), {}});

  // --- write everything ---
  for (ChainBuilder& cb : builders) {
    const fs::path dir = fs::path(out_dir) / std::string(to_string(cb.chain));
    fs::create_directories(dir);
    {
      std::ofstream out(dir / "transactions.jsonl", std::ios::binary);
      save_transactions(out, cb.txs);
    }
    {
      std::ofstream out(dir / "swaps.jsonl", std::ios::binary);
      save_swaps(out, cb.swaps);
    }
    {
      std::ofstream out(dir / "traces.jsonl", std::ios::binary);
      save_traces(out, cb.traces);
    }
    {
      std::ofstream out(dir / "labels.csv", std::ios::binary);
      save_labels(out, cb.labels);
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "ohlc.csv", std::ios::binary);
    save_ohlc(out, ohlc);
  }
  {
    std::ofstream out(fs::path(out_dir) / "bytecode.jsonl", std::ios::binary);
    save_bytecode(out, bytecodes);
  }
  {
    std::ofstream out(fs::path(out_dir) / "cyclarb.conf", std::ios::binary);
    out << "# fixture pipeline configuration\n"
        << "chains = ethereum,arbitrum,base,optimism\n"
        << "transactions = {chain}/transactions.jsonl\n"
        << "swaps = {chain}/swaps.jsonl\n"
        << "traces = {chain}/traces.jsonl\n"
        << "labels = {chain}/labels.csv\n"
        << "bytecode = bytecode.jsonl\n"
        << "ohlc = ohlc.csv\n"
        << "out_dir = out\n"
        << "event_date = " << event_date.to_string() << "\n";
  }

  // --- ground truth ---
  ordered_json truth;
  truth["days"] = days;
  truth["start"] = start.to_string();
  truth["event_date"] = event_date.to_string();
  truth["single_swap_decoy"] = {{"chain", "base"}, {"address", single_swap_decoy.hex()}};
  ordered_json bots_by_chain, candidates, cells, daily_gas, bot_stats;
  for (const ChainBuilder& cb : builders) {
    const std::string name(to_string(cb.chain));
    ordered_json bot_list = ordered_json::array();
    for (const Address& bot : cb.truth.bots) bot_list.push_back(bot.hex());
    bots_by_chain[name] = std::move(bot_list);
    ordered_json cand_list = ordered_json::array();
    for (const Address& addr : cb.truth.expected_candidates) cand_list.push_back(addr.hex());
    candidates[name] = std::move(cand_list);
    ordered_json cell_map;
    for (const auto& [cell, count] : cb.truth.cell_counts) cell_map[cell] = count;
    cells[name] = std::move(cell_map);
    ordered_json gas_map;
    for (const auto& [date, gas] : cb.truth.daily_total_gas) gas_map[date] = gas;
    daily_gas[name] = std::move(gas_map);
    ordered_json stats_map;
    for (const auto& [addr, bt] : cb.truth.bot_stats) {
      stats_map[addr.hex()] = {{"txs", bt.txs},
                               {"unique_calldata", bt.calldatas.size()},
                               {"txs_with_trades", bt.txs_with_trades},
                               {"swaps", bt.swaps},
                               {"gas", bt.gas}};
    }
    bot_stats[name] = std::move(stats_map);
  }
  truth["bots_by_chain"] = std::move(bots_by_chain);
  truth["expected_candidates"] = std::move(candidates);
  truth["cell_counts"] = std::move(cells);
  truth["daily_total_gas"] = std::move(daily_gas);
  truth["bot_stats"] = std::move(bot_stats);
  {
    std::ofstream out(fs::path(out_dir) / "truth.json", std::ios::binary);
    out << truth.dump(2) << '\n';
  }

  std::cerr << "fixture written to " << out_dir << " (" << days << " days, seed " << seed
            << ")\n";
  return 0;
}
