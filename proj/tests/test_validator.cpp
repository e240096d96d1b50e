#include "cyclarb/validator.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace cyclarb;
using namespace testutil;

namespace {

std::vector<const TransactionRecord*> ptrs(const std::vector<TransactionRecord>& txs) {
  std::vector<const TransactionRecord*> out;
  for (const auto& t : txs) out.push_back(&t);
  return out;
}

/// One trading tx (n swaps) for the candidate under test.
void add_trading_tx(std::vector<TransactionRecord>& txs, SwapsByTx& swaps, unsigned id,
                    const Address& contract, unsigned swap_count, uint64_t gas = 100'000) {
  txs.push_back(tx(id, addr(900), contract, 1000 * id, gas));
  for (unsigned s = 0; s < swap_count; ++s) {
    swaps[hash(id)].push_back(swap(id, addr(10 + s), addr(11 + s), 5, 6, s));
  }
}

}  // namespace

TEST_SUITE("validator") {

TEST_CASE("dex_interaction_rate") {
  const Address contract = addr(60), pool = addr(70);
  std::set<Address> pools = {pool};

  std::vector<TransactionRecord> txs;
  SwapsByTx swaps_by_tx;
  TracesByTx traces;
  // 10 non-trading txs; 8 of them probe the pool
  for (unsigned i = 1; i <= 10; ++i) {
    txs.push_back(tx(i, addr(900), contract));
    if (i <= 8) {
      traces[hash(i)].push_back({hash(i), CallType::StaticCall, pool, {}, 0});
    } else {
      traces[hash(i)].push_back({hash(i), CallType::Call, addr(80), {}, 0});
    }
  }
  CHECK(dex_interaction_rate(ptrs(txs), traces, swaps_by_tx, pools) == doctest::Approx(0.8));

  SUBCASE("zero of ten gives the exclusion-signal value 0.0") {
    TracesByTx no_pool;
    for (unsigned i = 1; i <= 10; ++i) {
      no_pool[hash(i)].push_back({hash(i), CallType::Call, addr(80), {}, 0});
    }
    CHECK(dex_interaction_rate(ptrs(txs), no_pool, swaps_by_tx, pools) == 0.0);
  }
  SUBCASE("all-trading contract has the vacuous rate 1.0") {
    for (unsigned i = 1; i <= 10; ++i) {
      swaps_by_tx[hash(i)].push_back(swap(i, addr(10), addr(11), 5, 6, 0));
    }
    CHECK(dex_interaction_rate(ptrs(txs), traces, swaps_by_tx, pools) == 1.0);
  }
  SUBCASE("trading txs do not enter the denominator") {
    // make the two pool-less txs trading: remaining 8 non-trading all touch
    swaps_by_tx[hash(9)].push_back(swap(9, addr(10), addr(11), 5, 6, 0));
    swaps_by_tx[hash(10)].push_back(swap(10, addr(10), addr(11), 5, 6, 0));
    CHECK(dex_interaction_rate(ptrs(txs), traces, swaps_by_tx, pools) == 1.0);
  }
}

TEST_CASE("caller_profile") {
  SUBCASE("one EOA firing every 2 seconds is not human") {
    std::vector<TransactionRecord> txs;
    for (unsigned i = 0; i < 40; ++i) txs.push_back(tx(i + 1, addr(900), addr(60), i * 2));
    auto [eoas, human] = caller_profile(ptrs(txs));
    CHECK(eoas == 1);
    CHECK_FALSE(human);
  }
  SUBCASE("five EOAs at 300s median gap and burst 2/min look human") {
    // timestamps 0,300,600,...; gaps all 300 > 30; max 60s-window count is 1
    std::vector<TransactionRecord> txs;
    for (unsigned i = 0; i < 10; ++i) {
      txs.push_back(tx(i + 1, addr(900 + i % 5), addr(60), i * 300));
    }
    auto [eoas, human] = caller_profile(ptrs(txs));
    CHECK(eoas == 5);
    CHECK(human);
  }
  SUBCASE("no transactions") {
    auto [eoas, human] = caller_profile({});
    CHECK(eoas == 0);
    CHECK_FALSE(human);
  }
  SUBCASE("burst cap breaks plausibility even with wide median gaps") {
    std::vector<TransactionRecord> txs;
    int64_t ts = 0;
    unsigned id = 1;
    for (unsigned c = 0; c < 6; ++c) {
      ts += 3600;
      for (unsigned b = 0; b < 12; ++b) txs.push_back(tx(id++, addr(900), addr(60), ts + b));
    }
    auto [eoas, human] = caller_profile(ptrs(txs));
    CHECK_FALSE(human);  // 12 txs inside one minute
  }
}

TEST_CASE("swap_count_percentiles") {
  const Address contract = addr(60);
  SUBCASE("counts [2,2,3,3,5] map onto themselves") {
    std::vector<TransactionRecord> txs;
    SwapsByTx swaps_by_tx;
    unsigned id = 1;
    for (unsigned c : {2u, 2u, 3u, 3u, 5u}) add_trading_tx(txs, swaps_by_tx, id++, contract, c);
    const SwapPercentiles p = swap_count_percentiles(ptrs(txs), swaps_by_tx);
    CHECK(p.p10 == 2);
    CHECK(p.p25 == 2);
    CHECK(p.p50 == 3);
    CHECK(p.p75 == 3);
    CHECK(p.p90 == 5);
  }
  SUBCASE("all-ones percentiles flag the single-swap profile") {
    std::vector<TransactionRecord> txs;
    SwapsByTx swaps_by_tx;
    for (unsigned i = 1; i <= 4; ++i) add_trading_tx(txs, swaps_by_tx, i, contract, 1);
    const SwapPercentiles p = swap_count_percentiles(ptrs(txs), swaps_by_tx);
    CHECK(p.p10 == 1);
    CHECK(p.p25 == 1);
    CHECK(p.p90 == 1);
  }
  SUBCASE("singleton count") {
    std::vector<TransactionRecord> txs;
    SwapsByTx swaps_by_tx;
    add_trading_tx(txs, swaps_by_tx, 1, contract, 2);
    const SwapPercentiles p = swap_count_percentiles(ptrs(txs), swaps_by_tx);
    CHECK(p.p10 == 2);
    CHECK(p.p90 == 2);
  }
  SUBCASE("no trading txs is an error") {
    std::vector<TransactionRecord> txs = {tx(1, addr(900), contract)};
    CHECK_THROWS_AS(swap_count_percentiles(ptrs(txs), SwapsByTx{}), Error);
  }
  SUBCASE("agrees with the sort-and-index oracle on random multisets") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 300; ++round) {
      const size_t n = 1 + rng() % 50;
      std::vector<TransactionRecord> txs;
      SwapsByTx swaps_by_tx;
      std::vector<uint32_t> counts;
      for (size_t i = 0; i < n; ++i) {
        const auto c = static_cast<uint32_t>(1 + rng() % 9);
        counts.push_back(c);
        add_trading_tx(txs, swaps_by_tx, static_cast<unsigned>(i + 1), addr(60), c);
      }
      const SwapPercentiles p = swap_count_percentiles(ptrs(txs), swaps_by_tx);
      CHECK(p.p10 == oracle::percentile(counts, 0.10));
      CHECK(p.p25 == oracle::percentile(counts, 0.25));
      CHECK(p.p50 == oracle::percentile(counts, 0.50));
      CHECK(p.p75 == oracle::percentile(counts, 0.75));
      CHECK(p.p90 == oracle::percentile(counts, 0.90));
    }
  }
}

namespace {

/// Builds a candidate with the given gas and a healthy multi-swap profile.
void plant_candidate(std::vector<TransactionRecord>& txs, SwapsByTx& swaps, TracesByTx& traces,
                     CandidateSet& candidates, unsigned& next_id, const Address& contract,
                     uint64_t gas_per_tx, unsigned trading = 3, unsigned probing = 2) {
  auto& evidence = candidates.contracts[contract];
  for (unsigned i = 0; i < trading; ++i) {
    const unsigned id = next_id++;
    txs.push_back(tx(id, addr(900), contract, 10 * id, gas_per_tx));
    swaps[hash(id)] = {swap(id, addr(10), addr(11), 5, 6, 0),
                       swap(id, addr(11), addr(10), 6, 7, 1)};
    evidence.total++;
    evidence.samples.push_back({hash(id), {}, {}});
  }
  for (unsigned i = 0; i < probing; ++i) {
    const unsigned id = next_id++;
    txs.push_back(tx(id, addr(900), contract, 10 * id, gas_per_tx));
    traces[hash(id)].push_back({hash(id), CallType::StaticCall, addr(70), {}, 0});
  }
}

}  // namespace

TEST_CASE("validate: coverage walk and screens") {
  const std::set<Address> pools = {addr(70)};
  ValidatorConfig config;  // defaults: 0.6 rate, 3 EOAs, 0.8 coverage

  SUBCASE("gas 70/20/10, none excludable: top two validated, third unreviewed-included") {
    std::vector<TransactionRecord> txs;
    SwapsByTx swaps;
    TracesByTx traces;
    CandidateSet candidates;
    unsigned id = 1;
    // 5 txs each at gas g/5 => totals 70k/20k/10k
    plant_candidate(txs, swaps, traces, candidates, id, addr(61), 14'000);
    plant_candidate(txs, swaps, traces, candidates, id, addr(62), 4'000);
    plant_candidate(txs, swaps, traces, candidates, id, addr(63), 2'000);
    const ValidationOutcome outcome =
        validate(candidates, txs, traces, swaps, pools, {}, config);
    REQUIRE(outcome.reports.size() == 3);
    CHECK(outcome.reports[0].address == addr(61));
    CHECK(outcome.reports[0].verdict == Verdict::Validated);
    CHECK(outcome.reports[1].verdict == Verdict::Validated);
    CHECK(outcome.reports[2].verdict == Verdict::Unreviewed);  // 90k/100k > 0.8 already
    CHECK(outcome.validated ==
          std::set<Address>{addr(61), addr(62), addr(63)});  // unreviewed included
    CHECK(outcome.coverage == doctest::Approx(0.9));
  }

  SUBCASE("exclusion label removes gas from both sides of the coverage ratio") {
    std::vector<TransactionRecord> txs;
    SwapsByTx swaps;
    TracesByTx traces;
    CandidateSet candidates;
    unsigned id = 1;
    plant_candidate(txs, swaps, traces, candidates, id, addr(61), 14'000);  // 70k, labeled
    plant_candidate(txs, swaps, traces, candidates, id, addr(62), 4'000);   // 20k
    plant_candidate(txs, swaps, traces, candidates, id, addr(63), 2'000);   // 10k
    const std::map<Address, std::string> exclusions = {{addr(61), "router"}};
    const ValidationOutcome outcome =
        validate(candidates, txs, traces, swaps, pools, exclusions, config);
    CHECK(outcome.reports[0].verdict == Verdict::Excluded);
    CHECK(outcome.reports[0].reasons.at(0) == "exclusion label: router");
    // after exclusion the denominator is 30k: 20k/30k <= 0.8, then 30k/30k
    CHECK(outcome.reports[1].verdict == Verdict::Validated);
    CHECK(outcome.reports[2].verdict == Verdict::Validated);
    CHECK(outcome.validated == std::set<Address>{addr(62), addr(63)});
    CHECK(outcome.coverage == doctest::Approx(1.0));
  }

  SUBCASE("P25 = 1 excludes with the percentile-screen reason") {
    std::vector<TransactionRecord> txs;
    SwapsByTx swaps;
    TracesByTx traces;
    CandidateSet candidates;
    unsigned id = 1;
    // single-swap profile: 10 one-swap txs
    const Address decoy = addr(64);
    auto& evidence = candidates.contracts[decoy];
    for (unsigned i = 0; i < 10; ++i) {
      const unsigned txid = id++;
      txs.push_back(tx(txid, addr(900), decoy, 10 * txid, 50'000));
      swaps[hash(txid)] = {swap(txid, addr(10), addr(11), 5, 6, 0)};
      evidence.total++;
      evidence.samples.push_back({hash(txid), {}, {}});
    }
    const ValidationOutcome outcome =
        validate(candidates, txs, traces, swaps, pools, {}, config);
    REQUIRE(outcome.reports.size() == 1);
    CHECK(outcome.reports[0].verdict == Verdict::Excluded);
    CHECK(outcome.reports[0].reasons.at(0) == "single-swap percentile screen");
    CHECK(outcome.validated.empty());
  }

  SUBCASE("low dex-interaction rate excludes") {
    std::vector<TransactionRecord> txs;
    SwapsByTx swaps;
    TracesByTx traces;
    CandidateSet candidates;
    unsigned id = 1;
    plant_candidate(txs, swaps, traces, candidates, id, addr(61), 10'000, 3, 0);
    // add 8 non-trading txs that never touch a pool: rate 0/8
    for (unsigned i = 0; i < 8; ++i) {
      const unsigned txid = id++;
      txs.push_back(tx(txid, addr(900), addr(61), 10 * txid, 10'000));
      traces[hash(txid)].push_back({hash(txid), CallType::Call, addr(90), {}, 0});
    }
    const ValidationOutcome outcome =
        validate(candidates, txs, traces, swaps, pools, {}, config);
    CHECK(outcome.reports[0].verdict == Verdict::Excluded);
    CHECK(outcome.reports[0].dex_interaction_rate == 0.0);
  }

  SUBCASE("many human-paced EOAs exclude; bot-paced EOAs do not") {
    std::vector<TransactionRecord> txs;
    SwapsByTx swaps;
    TracesByTx traces;
    CandidateSet candidates;
    const Address contract = addr(61);
    auto& evidence = candidates.contracts[contract];
    const bool human_paced = true;
    for (unsigned variant = 0; variant < 2; ++variant) {
      txs.clear();
      swaps.clear();
      for (unsigned i = 0; i < 8; ++i) {
        const int64_t ts = variant == human_paced ? i * 400 : i * 2;
        txs.push_back(tx(i + 1, addr(900 + i), contract, ts, 10'000));
        swaps[hash(i + 1)] = {swap(i + 1, addr(10), addr(11), 5, 6, 0),
                              swap(i + 1, addr(11), addr(10), 6, 7, 1)};
        if (evidence.total < 8) {
          evidence.total++;
          evidence.samples.push_back({hash(i + 1), {}, {}});
        }
      }
      const ValidationOutcome outcome =
          validate(candidates, txs, traces, swaps, pools, {}, config);
      if (variant == human_paced) {
        CHECK(outcome.reports[0].verdict == Verdict::Excluded);
      } else {
        CHECK(outcome.reports[0].verdict == Verdict::Validated);
      }
    }
  }
}

TEST_CASE("validate: empty candidate set") {
  const ValidationOutcome outcome = validate(CandidateSet{}, {}, {}, {}, {}, {}, {});
  CHECK(outcome.reports.empty());
  CHECK(outcome.validated.empty());
  CHECK(outcome.coverage == 1.0);  // vacuously complete
}

TEST_CASE("validate: partition invariant and determinism under ranking ties") {
  const std::set<Address> pools = {addr(70)};
  std::vector<TransactionRecord> txs;
  SwapsByTx swaps;
  TracesByTx traces;
  CandidateSet candidates;
  unsigned id = 1;
  for (unsigned c = 0; c < 6; ++c) {
    plant_candidate(txs, swaps, traces, candidates, id, addr(61 + c), 10'000);  // equal gas
  }
  const ValidationOutcome a = validate(candidates, txs, traces, swaps, pools, {}, {});
  const ValidationOutcome b = validate(candidates, txs, traces, swaps, pools, {}, {});
  REQUIRE(a.reports.size() == 6);
  // ties broken by address: ranking is lexicographic
  for (size_t i = 1; i < a.reports.size(); ++i) {
    CHECK(a.reports[i - 1].address < a.reports[i].address);
  }
  for (size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].address == b.reports[i].address);
    CHECK(a.reports[i].verdict == b.reports[i].verdict);
  }
  // verdict classes partition the candidate set
  std::set<Address> seen;
  size_t validated = 0, excluded = 0, unreviewed = 0;
  for (const auto& report : a.reports) {
    CHECK(seen.insert(report.address).second);
    switch (report.verdict) {
      case Verdict::Validated: validated++; break;
      case Verdict::Excluded: excluded++; break;
      case Verdict::Unreviewed: unreviewed++; break;
    }
  }
  CHECK(seen.size() == candidates.contracts.size());
  CHECK(validated + excluded + unreviewed == candidates.contracts.size());
  CHECK(a.validated.size() == validated + unreviewed);
  // coverage invariant: validated gas over non-excluded gas exceeds the
  // threshold unless every candidate was scored
  const bool all_scored = unreviewed == 0;
  CHECK((a.coverage > 0.8 || all_scored));
}

}  // TEST_SUITE
