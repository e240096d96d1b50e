#include "cyclarb/config.hpp"

#include "cyclarb/ingest.hpp"
#include "util/lines.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>

namespace cyclarb {

namespace {

std::string trim(std::string_view s) {
  size_t begin = s.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return "";
  size_t end = s.find_last_not_of(" \t");
  return std::string(s.substr(begin, end - begin + 1));
}

double parse_double_value(const std::string& key, const std::string& value) {
  double v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw Error("config: key '" + key + "': expected number, got '" + value + "'");
  }
  return v;
}

uint64_t parse_uint_value(const std::string& key, const std::string& value) {
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw Error("config: key '" + key + "': expected unsigned integer, got '" + value + "'");
  }
  return v;
}

bool parse_bool_value(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error("config: key '" + key + "': expected true|false, got '" + value + "'");
}

}  // namespace

std::string PipelineConfig::path_for(const std::string& templ, Chain chain) const {
  std::string out = templ;
  const std::string placeholder = "{chain}";
  const std::string name(to_string(chain));
  size_t pos = 0;
  while ((pos = out.find(placeholder, pos)) != std::string::npos) {
    out.replace(pos, placeholder.size(), name);
    pos += name.size();
  }
  return out;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  PipelineConfig cfg;
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& rel) {
    if (rel.empty() || std::filesystem::path(rel).is_absolute()) return rel;
    return (base / rel).string();
  };

  util::for_each_line(path, [&](size_t lineno, const std::string& raw) {
    std::string line = raw;
    if (size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) return;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "chains") {
      cfg.chains.clear();
      size_t start = 0;
      while (start <= value.size()) {
        size_t comma = value.find(',', start);
        const std::string item =
            trim(value.substr(start, comma == std::string::npos ? value.size() - start
                                                                : comma - start));
        if (!item.empty()) cfg.chains.push_back(parse_chain(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    } else if (key == "chain") {
      cfg.chains = {parse_chain(value)};
    } else if (key == "transactions") {
      cfg.transactions_path = resolve(value);
    } else if (key == "swaps") {
      cfg.swaps_path = resolve(value);
    } else if (key == "traces") {
      cfg.traces_path = resolve(value);
    } else if (key == "labels") {
      cfg.labels_path = resolve(value);
    } else if (key == "bytecode") {
      cfg.bytecode_path = resolve(value);
    } else if (key == "ohlc") {
      cfg.ohlc_path = resolve(value);
    } else if (key == "out_dir") {
      cfg.out_dir = resolve(value);
    } else if (key == "dex_interaction_min") {
      cfg.validator.dex_interaction_min = parse_double_value(key, value);
    } else if (key == "eoa_max") {
      cfg.validator.eoa_max = static_cast<uint32_t>(parse_uint_value(key, value));
    } else if (key == "human_gap_seconds") {
      cfg.validator.human_gap_seconds = static_cast<int64_t>(parse_uint_value(key, value));
    } else if (key == "human_burst_window_seconds") {
      cfg.validator.human_burst_window_seconds =
          static_cast<int64_t>(parse_uint_value(key, value));
    } else if (key == "human_burst_max") {
      cfg.validator.human_burst_max = static_cast<uint32_t>(parse_uint_value(key, value));
    } else if (key == "gas_coverage") {
      cfg.validator.gas_coverage = parse_double_value(key, value);
    } else if (key == "dust_epsilon") {
      cfg.detector.dust_epsilon = parse_biguint(value, "dust_epsilon");
    } else if (key == "evidence_cap") {
      cfg.detector.evidence_cap = parse_uint_value(key, value);
    } else if (key == "ngram_n") {
      cfg.ngram_n = static_cast<unsigned>(parse_uint_value(key, value));
    } else if (key == "event_date") {
      cfg.event_date = Date::parse(value);
    } else if (key == "allow_date_gaps") {
      cfg.allow_date_gaps = parse_bool_value(key, value);
    } else if (key == "workers") {
      cfg.workers = static_cast<unsigned>(parse_uint_value(key, value));
    } else {
      throw ParseError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  });

  cfg.validate_values();
  return cfg;
}

void PipelineConfig::validate_values() const {
  if (chains.empty()) throw Error("config: no chains configured");
  std::vector<Chain> sorted = chains;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error("config: duplicate chain entry");
  }
  if (validator.dex_interaction_min < 0.0 || validator.dex_interaction_min > 1.0) {
    throw Error("config: dex_interaction_min must be in [0, 1]");
  }
  if (validator.gas_coverage < 0.0 || validator.gas_coverage >= 1.0) {
    throw Error("config: gas_coverage must be in [0, 1)");
  }
  if (detector.evidence_cap == 0) throw Error("config: evidence_cap must be >= 1");
  if (ngram_n < 1 || ngram_n > 8) throw Error("config: ngram_n must be in [1, 8]");
}

}  // namespace cyclarb
