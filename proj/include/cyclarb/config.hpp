#pragma once

#include "cyclarb/detector.hpp"
#include "cyclarb/types.hpp"
#include "cyclarb/validator.hpp"

#include <string>
#include <vector>

namespace cyclarb {

/// Declarative pipeline configuration, read from a `key = value` file
/// ('#' starts a comment). Input paths are resolved relative to the config
/// file's directory and may contain a `{chain}` placeholder, substituted
/// per entry of `chains`. Every detection/validation threshold surfaces
/// here so the pipeline's constants are auditable from one place.
struct PipelineConfig {
  std::vector<Chain> chains;

  std::string transactions_path;
  std::string swaps_path;
  std::string traces_path;
  std::string labels_path;
  std::string bytecode_path;  // one cross-chain file
  std::string ohlc_path;      // one shared price file
  std::string out_dir = "out";

  DetectorConfig detector;
  ValidatorConfig validator;
  unsigned ngram_n = 5;
  Date event_date = Date::from_ymd(2024, 3, 13);  // growth-normalization anchor
  bool allow_date_gaps = false;
  unsigned workers = 0;  // 0 = hardware concurrency

  /// Path for one chain: applies the {chain} placeholder.
  std::string path_for(const std::string& templ, Chain chain) const;

  static PipelineConfig load(const std::string& path);
  void validate_values() const;  // throws Error on out-of-range thresholds
};

}  // namespace cyclarb
