#include "cyclarb/pipeline.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace cyclarb;
using namespace testutil;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("candidates artifact round trip") {
  TempDir dir;
  CandidateSet candidates;
  auto& a = candidates.contracts[addr(1)];
  a.total = 12;
  a.first_seen_block = 777;
  for (unsigned i = 0; i < 3; ++i) a.samples.push_back({hash(10 + i), {}, {}});
  auto& b = candidates.contracts[addr(2)];
  b.total = 1;
  b.first_seen_block = 900;
  b.samples.push_back({hash(99), {}, {}});

  const std::string path = (dir.path() / "candidates.json").string();
  pipeline::write_candidates_json(path, candidates);
  const CandidateSet loaded = pipeline::read_candidates_json(path);
  REQUIRE(loaded.contracts.size() == 2);
  CHECK(loaded.contracts.at(addr(1)).total == 12);
  CHECK(loaded.contracts.at(addr(1)).first_seen_block == 777);
  CHECK(loaded.contracts.at(addr(1)).samples.size() == 3);
  CHECK(loaded.contracts.at(addr(1)).samples[0].tx_hash == hash(10));
  CHECK(loaded.contracts.at(addr(2)).total == 1);

  // writing the loaded set back reproduces the bytes
  const std::string path2 = (dir.path() / "candidates2.json").string();
  pipeline::write_candidates_json(path2, loaded);
  CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("bots artifact round trip") {
  TempDir dir;
  ValidationOutcome outcome;
  outcome.validated = {addr(3), addr(1), addr(2)};
  outcome.coverage = 0.9375;
  const std::string path = (dir.path() / "bots.json").string();
  pipeline::write_bots_json(path, outcome);
  CHECK(pipeline::read_bots_json(path) == outcome.validated);
}

TEST_CASE("classified artifact round trip preserves order and labels") {
  TempDir dir;
  std::vector<ClassifiedTx> classified = {
      {hash(5), Purpose::CyclicArb, Involvement::Trade, Outcome::Success},
      {hash(2), Purpose::Other, Involvement::Interaction, Outcome::Revert},
      {hash(9), Purpose::Other, Involvement::Residual, Outcome::Success},
  };
  const std::string path = (dir.path() / "classified.jsonl").string();
  pipeline::write_classified_jsonl(path, classified);
  CHECK(pipeline::read_classified_jsonl(path) == classified);
}

TEST_CASE("library pipeline stages reproduce CLI-identical artifacts on the fixture") {
  // run detect -> validate -> classify twice via the stage runners into two
  // directories and require byte-identical artifacts
  TempDir out1, out2;
  PipelineConfig config = PipelineConfig::load("fixtures/accept3d/cyclarb.conf");

  for (const TempDir* out : {&out1, &out2}) {
    config.out_dir = out->path().string();
    pipeline::run_detect(config);
    pipeline::run_validate(config);
    pipeline::run_classify(config);
  }
  for (Chain chain : config.chains) {
    config.out_dir = out1.path().string();
    const std::string c1 = pipeline::candidates_path(config, chain);
    const std::string v1 = pipeline::validation_report_path(config, chain);
    const std::string l1 = pipeline::classified_path(config, chain);
    config.out_dir = out2.path().string();
    CHECK(slurp(c1) == slurp(pipeline::candidates_path(config, chain)));
    CHECK(slurp(v1) == slurp(pipeline::validation_report_path(config, chain)));
    CHECK(slurp(l1) == slurp(pipeline::classified_path(config, chain)));
  }
}

}  // TEST_SUITE
