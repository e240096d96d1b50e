#include "cyclarb/ingest.hpp"

#include "util/csv.hpp"
#include "util/lines.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>
#include <unordered_map>

namespace cyclarb {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void field_error(const std::string& path, size_t line,
                              std::string_view field, const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": field '" +
                   std::string(field) + "': " + what);
}

json parse_json_line(const std::string& path, size_t line, const std::string& text) {
  json obj = json::parse(text, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw ParseError(path + ":" + std::to_string(line) + ": not a JSON object");
  }
  return obj;
}

const json& require(const json& obj, const std::string& path, size_t line,
                    std::string_view field) {
  auto it = obj.find(field);
  if (it == obj.end()) field_error(path, line, field, "missing");
  return *it;
}

std::string get_string(const json& obj, const std::string& path, size_t line,
                       std::string_view field) {
  const json& v = require(obj, path, line, field);
  if (!v.is_string()) field_error(path, line, field, "expected string");
  return v.get<std::string>();
}

uint64_t get_uint(const json& obj, const std::string& path, size_t line,
                  std::string_view field) {
  const json& v = require(obj, path, line, field);
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    uint64_t out = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc() && p == s.data() + s.size()) return out;
  }
  field_error(path, line, field, "expected unsigned integer");
}

template <typename Fn>
auto checked(const std::string& path, size_t line, std::string_view field, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    field_error(path, line, field, e.what());
  }
}

}  // namespace

BigInt parse_biguint(std::string_view s, std::string_view what) {
  if (s.empty()) throw Error(std::string(what) + ": empty decimal string");
  for (char c : s) {
    if (c < '0' || c > '9') {
      throw Error(std::string(what) + ": expected decimal digits, got '" +
                  std::string(s) + "'");
    }
  }
  return BigInt(std::string(s));
}

void for_each_transaction(const std::string& path, Chain chain,
                          const std::function<void(TransactionRecord&&)>& sink) {
  std::unordered_map<std::string, size_t> seen_hashes;
  util::for_each_line(path, [&](size_t lineno, const std::string& line) {
    const json obj = parse_json_line(path, lineno, line);
    TransactionRecord tx;
    tx.hash = checked(path, lineno, "hash",
                      [&] { return TxHash::parse(get_string(obj, path, lineno, "hash")); });
    auto [it, inserted] = seen_hashes.emplace(tx.hash.hex(), lineno);
    if (!inserted) {
      field_error(path, lineno, "hash",
                  "duplicate of line " + std::to_string(it->second));
    }
    tx.from_addr = checked(path, lineno, "from",
                           [&] { return Address::parse(get_string(obj, path, lineno, "from")); });
    {
      auto to_it = obj.find("to");
      if (to_it != obj.end() && !to_it->is_null()) {
        if (!to_it->is_string()) field_error(path, lineno, "to", "expected string or null");
        const std::string to_str = to_it->get<std::string>();
        if (!to_str.empty()) {
          tx.to_addr =
              checked(path, lineno, "to", [&] { return Address::parse(to_str); });
        }
      }
    }
    tx.block_number = get_uint(obj, path, lineno, "block_number");
    tx.timestamp = checked(path, lineno, "block_time", [&] {
      return parse_iso8601_utc(get_string(obj, path, lineno, "block_time"));
    });
    tx.gas_used = get_uint(obj, path, lineno, "gas_used");
    if (tx.gas_used == 0) {
      field_error(path, lineno, "gas_used", "must be > 0 for included transactions");
    }
    tx.gas_price = checked(path, lineno, "gas_price", [&] {
      return parse_biguint(get_string(obj, path, lineno, "gas_price"), "gas_price");
    });
    tx.calldata = checked(path, lineno, "calldata", [&] {
      return parse_hex_bytes(get_string(obj, path, lineno, "calldata"));
    });
    const uint64_t status = get_uint(obj, path, lineno, "status");
    if (status > 1) field_error(path, lineno, "status", "expected 0 or 1");
    tx.status = status == 1 ? TxStatus::Success : TxStatus::Revert;
    if (obj.contains("chain")) {
      const Chain file_chain = checked(path, lineno, "chain", [&] {
        return parse_chain(get_string(obj, path, lineno, "chain"));
      });
      if (file_chain != chain) {
        field_error(path, lineno, "chain",
                    "file says '" + std::string(to_string(file_chain)) +
                        "' but loader was given '" + std::string(to_string(chain)) + "'");
      }
    }
    tx.chain = chain;
    sink(std::move(tx));
  });
}

std::vector<TransactionRecord> load_transactions(const std::string& path, Chain chain) {
  std::vector<TransactionRecord> out;
  for_each_transaction(path, chain, [&](TransactionRecord&& tx) { out.push_back(std::move(tx)); });
  return out;
}

SwapsByTx load_swaps(const std::string& path) {
  SwapsByTx groups;
  util::for_each_line(path, [&](size_t lineno, const std::string& line) {
    const json obj = parse_json_line(path, lineno, line);
    SwapEvent ev;
    ev.tx_hash = checked(path, lineno, "tx_hash",
                         [&] { return TxHash::parse(get_string(obj, path, lineno, "tx_hash")); });
    ev.evt_index = static_cast<uint32_t>(get_uint(obj, path, lineno, "evt_index"));
    ev.token_sold = checked(path, lineno, "token_sold", [&] {
      return Address::parse(get_string(obj, path, lineno, "token_sold"));
    });
    ev.token_bought = checked(path, lineno, "token_bought", [&] {
      return Address::parse(get_string(obj, path, lineno, "token_bought"));
    });
    if (ev.token_sold == ev.token_bought) {
      field_error(path, lineno, "token_bought", "self-swap: token_sold == token_bought");
    }
    ev.amount_sold = checked(path, lineno, "amount_sold", [&] {
      return parse_biguint(get_string(obj, path, lineno, "amount_sold"), "amount_sold");
    });
    ev.amount_bought = checked(path, lineno, "amount_bought", [&] {
      return parse_biguint(get_string(obj, path, lineno, "amount_bought"), "amount_bought");
    });
    if (ev.amount_sold == 0) field_error(path, lineno, "amount_sold", "must be > 0");
    if (ev.amount_bought == 0) field_error(path, lineno, "amount_bought", "must be > 0");

    auto& group = groups[ev.tx_hash];
    for (const SwapEvent& other : group) {
      if (other.evt_index == ev.evt_index) {
        field_error(path, lineno, "evt_index",
                    "duplicate evt_index " + std::to_string(ev.evt_index) +
                        " within tx " + ev.tx_hash.hex());
      }
    }
    group.push_back(std::move(ev));
  });
  for (auto& [hash, group] : groups) {
    std::sort(group.begin(), group.end(),
              [](const SwapEvent& a, const SwapEvent& b) { return a.evt_index < b.evt_index; });
  }
  return groups;
}

TracesByTx load_traces(const std::string& path) {
  TracesByTx groups;
  util::for_each_line(path, [&](size_t lineno, const std::string& line) {
    const json obj = parse_json_line(path, lineno, line);
    TraceCall call;
    call.tx_hash = checked(path, lineno, "tx_hash",
                           [&] { return TxHash::parse(get_string(obj, path, lineno, "tx_hash")); });
    call.depth_order = static_cast<uint32_t>(get_uint(obj, path, lineno, "order"));
    call.call_type = checked(path, lineno, "call_type", [&] {
      return parse_call_type(get_string(obj, path, lineno, "call_type"));
    });
    call.callee = checked(path, lineno, "to",
                          [&] { return Address::parse(get_string(obj, path, lineno, "to")); });
    if (obj.contains("input_selector") && !obj["input_selector"].is_null()) {
      call.selector = checked(path, lineno, "input_selector", [&] {
        return parse_hex_bytes(get_string(obj, path, lineno, "input_selector"));
      });
      if (call.selector.size() > 4) {
        field_error(path, lineno, "input_selector", "longer than 4 bytes");
      }
    }
    auto& group = groups[call.tx_hash];
    for (const TraceCall& other : group) {
      if (other.depth_order == call.depth_order) {
        field_error(path, lineno, "order",
                    "duplicate order " + std::to_string(call.depth_order) +
                        " within tx " + call.tx_hash.hex());
      }
    }
    group.push_back(std::move(call));
  });
  for (auto& [hash, group] : groups) {
    std::sort(group.begin(), group.end(),
              [](const TraceCall& a, const TraceCall& b) { return a.depth_order < b.depth_order; });
  }
  return groups;
}

LabelSet load_labels(const std::string& path) {
  LabelSet labels;
  bool saw_header = false;
  util::for_each_line(path, [&](size_t lineno, const std::string& line) {
    const auto fields = util::split_csv_line(line);
    if (!saw_header) {
      saw_header = true;
      if (fields.size() < 2 || fields[0] != "address") {
        throw ParseError(path + ":1: expected header 'address,kind,note'");
      }
      return;
    }
    if (fields.size() < 2) field_error(path, lineno, "kind", "missing");
    const Address addr =
        checked(path, lineno, "address", [&] { return Address::parse(fields[0]); });
    const std::string& kind = fields[1];
    const std::string note = fields.size() > 2 ? fields[2] : "";
    if (kind == "router") labels.routers.insert(addr);
    else if (kind == "aggregator") labels.aggregators.insert(addr);
    else if (kind == "pool") labels.dex_pools.insert(addr);
    else if (kind == "exclude") labels.exclusion_labels[addr] = note;
    else field_error(path, lineno, "kind", "expected router|aggregator|pool|exclude, got '" + kind + "'");
  });
  return labels;
}

std::vector<OhlcBar> load_ohlc(const std::string& path) {
  std::vector<OhlcBar> bars;
  std::map<int32_t, size_t> seen_dates;
  bool saw_header = false;
  util::for_each_line(path, [&](size_t lineno, const std::string& line) {
    const auto fields = util::split_csv_line(line);
    if (!saw_header) {
      saw_header = true;
      if (fields.empty() || fields[0] != "date") {
        throw ParseError(path + ":1: expected header 'date,open,high,low,close'");
      }
      return;
    }
    if (fields.size() != 5) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 5 columns");
    }
    OhlcBar bar;
    bar.date = checked(path, lineno, "date", [&] { return Date::parse(fields[0]); });
    auto parse_price = [&](const std::string& s, std::string_view field) {
      double v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) {
        field_error(path, lineno, field, "expected decimal price, got '" + s + "'");
      }
      return v;
    };
    bar.open = parse_price(fields[1], "open");
    bar.high = parse_price(fields[2], "high");
    bar.low = parse_price(fields[3], "low");
    bar.close = parse_price(fields[4], "close");
    if (!(bar.low > 0)) field_error(path, lineno, "low", "must be > 0");
    if (bar.low > std::min(bar.open, bar.close)) {
      field_error(path, lineno, "low", "exceeds min(open, close)");
    }
    if (bar.high < std::max(bar.open, bar.close)) {
      field_error(path, lineno, "high", "below max(open, close)");
    }
    auto [it, inserted] = seen_dates.emplace(bar.date.days(), lineno);
    if (!inserted) {
      field_error(path, lineno, "date", "duplicate of line " + std::to_string(it->second));
    }
    bars.push_back(bar);
  });
  return bars;
}

std::vector<ContractBytecode> load_bytecode(const std::string& path) {
  std::vector<ContractBytecode> out;
  std::unordered_map<std::string, size_t> seen;
  util::for_each_line(path, [&](size_t lineno, const std::string& line) {
    const json obj = parse_json_line(path, lineno, line);
    ContractBytecode bc;
    bc.address = checked(path, lineno, "address", [&] {
      return Address::parse(get_string(obj, path, lineno, "address"));
    });
    auto [it, inserted] = seen.emplace(bc.address.hex(), lineno);
    if (!inserted) {
      field_error(path, lineno, "address", "duplicate of line " + std::to_string(it->second));
    }
    bc.code = checked(path, lineno, "code",
                      [&] { return parse_hex_bytes(get_string(obj, path, lineno, "code")); });
    out.push_back(std::move(bc));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Canonical serialization
// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void save_transactions(std::ostream& out, const std::vector<TransactionRecord>& txs) {
  for (const TransactionRecord& tx : txs) {
    ordered_json obj;
    obj["hash"] = tx.hash.hex();
    obj["from"] = tx.from_addr.hex();
    obj["to"] = tx.to_addr ? tx.to_addr->hex() : "";
    obj["block_number"] = tx.block_number;
    obj["block_time"] = format_iso8601_utc(tx.timestamp);
    obj["gas_used"] = tx.gas_used;
    obj["gas_price"] = tx.gas_price.str();
    obj["calldata"] = to_hex(tx.calldata);
    obj["status"] = tx.status == TxStatus::Success ? 1 : 0;
    obj["chain"] = std::string(to_string(tx.chain));
    out << obj.dump() << '\n';
  }
}

void save_swaps(std::ostream& out, const SwapsByTx& swaps) {
  for (const auto& [hash, group] : swaps) {
    for (const SwapEvent& ev : group) {
      ordered_json obj;
      obj["tx_hash"] = ev.tx_hash.hex();
      obj["evt_index"] = ev.evt_index;
      obj["token_sold"] = ev.token_sold.hex();
      obj["token_bought"] = ev.token_bought.hex();
      obj["amount_sold"] = ev.amount_sold.str();
      obj["amount_bought"] = ev.amount_bought.str();
      out << obj.dump() << '\n';
    }
  }
}

void save_traces(std::ostream& out, const TracesByTx& traces) {
  for (const auto& [hash, group] : traces) {
    for (const TraceCall& call : group) {
      ordered_json obj;
      obj["tx_hash"] = call.tx_hash.hex();
      obj["order"] = call.depth_order;
      obj["call_type"] = std::string(to_string(call.call_type));
      obj["to"] = call.callee.hex();
      obj["input_selector"] = to_hex(call.selector);
      out << obj.dump() << '\n';
    }
  }
}

void save_labels(std::ostream& out, const LabelSet& labels) {
  out << "address,kind,note\n";
  for (const Address& a : labels.routers) util::write_csv_row(out, {a.hex(), "router", ""});
  for (const Address& a : labels.aggregators) util::write_csv_row(out, {a.hex(), "aggregator", ""});
  for (const Address& a : labels.dex_pools) util::write_csv_row(out, {a.hex(), "pool", ""});
  for (const auto& [a, note] : labels.exclusion_labels) {
    util::write_csv_row(out, {a.hex(), "exclude", note});
  }
}

void save_ohlc(std::ostream& out, const std::vector<OhlcBar>& bars) {
  out << "date,open,high,low,close\n";
  for (const OhlcBar& bar : bars) {
    util::write_csv_row(out, {bar.date.to_string(), format_double(bar.open),
                              format_double(bar.high), format_double(bar.low),
                              format_double(bar.close)});
  }
}

void save_bytecode(std::ostream& out, const std::vector<ContractBytecode>& codes) {
  for (const ContractBytecode& bc : codes) {
    ordered_json obj;
    obj["address"] = bc.address.hex();
    obj["code"] = to_hex(bc.code);
    out << obj.dump() << '\n';
  }
}

}  // namespace cyclarb
