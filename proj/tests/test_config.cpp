#include "cyclarb/config.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace cyclarb;
using namespace testutil;

TEST_SUITE("config") {

TEST_CASE("full config parses with relative path resolution") {
  TempDir dir;
  const auto path = dir.file("cyclarb.conf",
                             "# comment line\n"
                             "chains = base, optimism\n"
                             "transactions = {chain}/transactions.jsonl\n"
                             "swaps = {chain}/swaps.jsonl\n"
                             "traces = {chain}/traces.jsonl\n"
                             "labels = {chain}/labels.csv\n"
                             "bytecode = bytecode.jsonl\n"
                             "ohlc = ohlc.csv\n"
                             "out_dir = out\n"
                             "dex_interaction_min = 0.7\n"
                             "eoa_max = 4\n"
                             "human_gap_seconds = 45\n"
                             "human_burst_window_seconds = 90\n"
                             "human_burst_max = 12\n"
                             "gas_coverage = 0.85\n"
                             "dust_epsilon = 10\n"
                             "evidence_cap = 50\n"
                             "ngram_n = 4\n"
                             "event_date = 2024-03-13\n"
                             "allow_date_gaps = true\n"
                             "workers = 3\n");
  const PipelineConfig config = PipelineConfig::load(path);
  CHECK(config.chains == std::vector<Chain>{Chain::Base, Chain::Optimism});
  CHECK(config.path_for(config.transactions_path, Chain::Base) ==
        (dir.path() / "base/transactions.jsonl").string());
  CHECK(config.validator.dex_interaction_min == 0.7);
  CHECK(config.validator.eoa_max == 4);
  CHECK(config.validator.gas_coverage == 0.85);
  CHECK(config.detector.dust_epsilon == BigInt(10));
  CHECK(config.detector.evidence_cap == 50);
  CHECK(config.ngram_n == 4);
  CHECK(config.event_date == Date::parse("2024-03-13"));
  CHECK(config.allow_date_gaps);
  CHECK(config.workers == 3);
}

TEST_CASE("defaults surface the documented thresholds") {
  TempDir dir;
  const auto path = dir.file("min.conf", "chain = base\n");
  const PipelineConfig config = PipelineConfig::load(path);
  CHECK(config.validator.dex_interaction_min == 0.6);
  CHECK(config.validator.eoa_max == 3);
  CHECK(config.validator.human_gap_seconds == 30);
  CHECK(config.validator.human_burst_max == 10);
  CHECK(config.validator.gas_coverage == 0.8);
  CHECK(config.detector.dust_epsilon == BigInt(0));
  CHECK(config.detector.evidence_cap == 100);
  CHECK(config.ngram_n == 5);
  CHECK(config.event_date == Date::from_ymd(2024, 3, 13));
}

TEST_CASE("rejects bad values") {
  TempDir dir;
  CHECK_THROWS_AS(PipelineConfig::load(dir.file("a.conf", "chains = base\nngram_n = 9\n")),
                  Error);
  CHECK_THROWS_AS(
      PipelineConfig::load(dir.file("b.conf", "chains = base\ngas_coverage = 1.5\n")), Error);
  CHECK_THROWS_AS(PipelineConfig::load(dir.file("c.conf", "chains = \n")), Error);
  CHECK_THROWS_AS(PipelineConfig::load(dir.file("d.conf", "chains = base,base\n")), Error);
  CHECK_THROWS_AS(PipelineConfig::load(dir.file("e.conf", "chains = base\nbogus_key = 1\n")),
                  ParseError);
  CHECK_THROWS_AS(PipelineConfig::load(dir.file("f.conf", "chains = base\nno equals sign\n")),
                  ParseError);
  CHECK_THROWS_AS(PipelineConfig::load("/nonexistent/x.conf"), FileError);
}

}  // TEST_SUITE
