#pragma once

#include "cyclarb/classifier.hpp"
#include "cyclarb/config.hpp"
#include "cyclarb/detector.hpp"
#include "cyclarb/validator.hpp"

#include <string>

namespace cyclarb::pipeline {

/// Immutable per-chain input bundle.
struct ChainData {
  Chain chain = Chain::Ethereum;
  std::vector<TransactionRecord> txs;
  SwapsByTx swaps;
  TracesByTx traces;
  LabelSet labels;
};

ChainData load_chain(const PipelineConfig& config, Chain chain);

// Stage runners. Each loads its own inputs (raw exports plus prior-stage
// artifacts), computes, and writes the stage's reports under
// config.out_dir. Outputs are a pure function of (inputs, config).
void run_detect(const PipelineConfig& config);
void run_validate(const PipelineConfig& config);
void run_classify(const PipelineConfig& config);
void run_metrics(const PipelineConfig& config);
void run_similarity(const PipelineConfig& config);
void run_regress(const PipelineConfig& config);
void run_pipeline(const PipelineConfig& config);

/// Dispatches by subcommand name; throws Error on an unknown name.
void run_stage(const std::string& stage, const PipelineConfig& config);

// Artifact round-trips used for stage isolation.
std::string candidates_path(const PipelineConfig& config, Chain chain);
std::string validation_report_path(const PipelineConfig& config, Chain chain);
std::string bots_path(const PipelineConfig& config, Chain chain);
std::string classified_path(const PipelineConfig& config, Chain chain);

void write_candidates_json(const std::string& path, const CandidateSet& candidates);
/// Restores candidate addresses, totals, first blocks and sample hashes;
/// evidence bodies (paths/deltas) are not serialized and stay empty.
CandidateSet read_candidates_json(const std::string& path);

void write_validation_report_csv(const std::string& path, const ValidationOutcome& outcome);
void write_bots_json(const std::string& path, const ValidationOutcome& outcome);
std::set<Address> read_bots_json(const std::string& path);

void write_classified_jsonl(const std::string& path,
                            const std::vector<ClassifiedTx>& classified);
std::vector<ClassifiedTx> read_classified_jsonl(const std::string& path);

}  // namespace cyclarb::pipeline
