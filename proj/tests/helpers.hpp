#pragma once

#include "cyclarb/types.hpp"

#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <string>

namespace testutil {

using namespace cyclarb;

inline Address addr(unsigned i) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "0x%040x", i);
  return Address::parse(buf);
}

inline TxHash hash(unsigned i) {
  char buf[72];
  std::snprintf(buf, sizeof buf, "0x%064x", i);
  return TxHash::parse(buf);
}

inline SwapEvent swap(unsigned tx, const Address& sold, const Address& bought,
                      const BigInt& amount_sold, const BigInt& amount_bought, uint32_t idx) {
  SwapEvent ev;
  ev.tx_hash = hash(tx);
  ev.token_sold = sold;
  ev.token_bought = bought;
  ev.amount_sold = amount_sold;
  ev.amount_bought = amount_bought;
  ev.evt_index = idx;
  return ev;
}

inline TransactionRecord tx(unsigned id, const Address& from, const Address& to,
                            int64_t timestamp = 0, uint64_t gas = 100'000,
                            TxStatus status = TxStatus::Success,
                            Chain chain = Chain::Base) {
  TransactionRecord record;
  record.hash = hash(id);
  record.from_addr = from;
  if (!to.empty()) record.to_addr = to;
  record.block_number = 1000 + id;
  record.timestamp = timestamp;
  record.gas_used = gas;
  record.gas_price = BigInt(1'000'000);
  record.status = status;
  record.chain = chain;
  return record;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static unsigned counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("cyclarb_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    std::ofstream out(p, std::ios::binary);
    out << contents;
    return p.string();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
