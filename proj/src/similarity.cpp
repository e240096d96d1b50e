#include "cyclarb/similarity.hpp"

#include "cyclarb/ingest.hpp"
#include "cyclarb/kernels.hpp"
#include "util/csv.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

namespace cyclarb {

namespace evm {

namespace {

std::array<OpcodeInfo, 256> build_table() {
  std::array<OpcodeInfo, 256> table;
  table.fill({"INVALID", 0, false});
  auto set = [&](uint8_t op, std::string_view name, uint8_t operands = 0) {
    table[op] = {name, operands, true};
  };

  set(0x00, "STOP");
  set(0x01, "ADD");
  set(0x02, "MUL");
  set(0x03, "SUB");
  set(0x04, "DIV");
  set(0x05, "SDIV");
  set(0x06, "MOD");
  set(0x07, "SMOD");
  set(0x08, "ADDMOD");
  set(0x09, "MULMOD");
  set(0x0a, "EXP");
  set(0x0b, "SIGNEXTEND");

  set(0x10, "LT");
  set(0x11, "GT");
  set(0x12, "SLT");
  set(0x13, "SGT");
  set(0x14, "EQ");
  set(0x15, "ISZERO");
  set(0x16, "AND");
  set(0x17, "OR");
  set(0x18, "XOR");
  set(0x19, "NOT");
  set(0x1a, "BYTE");
  set(0x1b, "SHL");
  set(0x1c, "SHR");
  set(0x1d, "SAR");

  set(0x20, "KECCAK256");

  set(0x30, "ADDRESS");
  set(0x31, "BALANCE");
  set(0x32, "ORIGIN");
  set(0x33, "CALLER");
  set(0x34, "CALLVALUE");
  set(0x35, "CALLDATALOAD");
  set(0x36, "CALLDATASIZE");
  set(0x37, "CALLDATACOPY");
  set(0x38, "CODESIZE");
  set(0x39, "CODECOPY");
  set(0x3a, "GASPRICE");
  set(0x3b, "EXTCODESIZE");
  set(0x3c, "EXTCODECOPY");
  set(0x3d, "RETURNDATASIZE");
  set(0x3e, "RETURNDATACOPY");
  set(0x3f, "EXTCODEHASH");

  set(0x40, "BLOCKHASH");
  set(0x41, "COINBASE");
  set(0x42, "TIMESTAMP");
  set(0x43, "NUMBER");
  set(0x44, "PREVRANDAO");
  set(0x45, "GASLIMIT");
  set(0x46, "CHAINID");
  set(0x47, "SELFBALANCE");
  set(0x48, "BASEFEE");

  set(0x50, "POP");
  set(0x51, "MLOAD");
  set(0x52, "MSTORE");
  set(0x53, "MSTORE8");
  set(0x54, "SLOAD");
  set(0x55, "SSTORE");
  set(0x56, "JUMP");
  set(0x57, "JUMPI");
  set(0x58, "PC");
  set(0x59, "MSIZE");
  set(0x5a, "GAS");
  set(0x5b, "JUMPDEST");
  set(0x5f, "PUSH0");

  static constexpr std::string_view push_names[] = {
      "PUSH1",  "PUSH2",  "PUSH3",  "PUSH4",  "PUSH5",  "PUSH6",  "PUSH7",  "PUSH8",
      "PUSH9",  "PUSH10", "PUSH11", "PUSH12", "PUSH13", "PUSH14", "PUSH15", "PUSH16",
      "PUSH17", "PUSH18", "PUSH19", "PUSH20", "PUSH21", "PUSH22", "PUSH23", "PUSH24",
      "PUSH25", "PUSH26", "PUSH27", "PUSH28", "PUSH29", "PUSH30", "PUSH31", "PUSH32"};
  for (unsigned k = 0; k < 32; ++k) {
    set(static_cast<uint8_t>(0x60 + k), push_names[k], static_cast<uint8_t>(k + 1));
  }

  static constexpr std::string_view dup_names[] = {
      "DUP1",  "DUP2",  "DUP3",  "DUP4",  "DUP5",  "DUP6",  "DUP7",  "DUP8",
      "DUP9",  "DUP10", "DUP11", "DUP12", "DUP13", "DUP14", "DUP15", "DUP16"};
  static constexpr std::string_view swap_names[] = {
      "SWAP1",  "SWAP2",  "SWAP3",  "SWAP4",  "SWAP5",  "SWAP6",  "SWAP7",  "SWAP8",
      "SWAP9",  "SWAP10", "SWAP11", "SWAP12", "SWAP13", "SWAP14", "SWAP15", "SWAP16"};
  for (unsigned k = 0; k < 16; ++k) {
    set(static_cast<uint8_t>(0x80 + k), dup_names[k]);
    set(static_cast<uint8_t>(0x90 + k), swap_names[k]);
  }

  set(0xa0, "LOG0");
  set(0xa1, "LOG1");
  set(0xa2, "LOG2");
  set(0xa3, "LOG3");
  set(0xa4, "LOG4");

  set(0xf0, "CREATE");
  set(0xf1, "CALL");
  set(0xf2, "CALLCODE");
  set(0xf3, "RETURN");
  set(0xf4, "DELEGATECALL");
  set(0xf5, "CREATE2");
  set(0xfa, "STATICCALL");
  set(0xfd, "REVERT");
  set(0xfe, "INVALID");
  set(0xff, "SELFDESTRUCT");

  return table;
}

}  // namespace

const std::array<OpcodeInfo, 256>& opcode_table() {
  static const std::array<OpcodeInfo, 256> table = build_table();
  return table;
}

uint8_t canonical_opcode(uint8_t byte) {
  return opcode_table()[byte].assigned ? byte : kInvalidOpcode;
}

std::string_view mnemonic(uint8_t opcode_id) { return opcode_table()[opcode_id].name; }

}  // namespace evm

OpcodeSeq disassemble(std::span<const uint8_t> code) {
  OpcodeSeq seq;
  seq.ops.reserve(code.size());
  const auto& table = evm::opcode_table();
  size_t pc = 0;
  while (pc < code.size()) {
    const uint8_t byte = code[pc];
    seq.ops.push_back(evm::canonical_opcode(byte));
    pc += 1 + table[byte].operand_bytes;  // a truncated final PUSH just ends the scan
  }
  return seq;
}

OpcodeVector ngram_vector(const OpcodeSeq& seq, unsigned n) {
  if (n < 1 || n > 8) {
    throw Error("ngram_vector: window size must be in [1, 8], got " + std::to_string(n));
  }
  OpcodeVector vec;
  if (seq.ops.size() < n) return vec;

  const size_t chunks = seq.ops.size() - n + 1;
  std::vector<uint64_t> keys;
  keys.reserve(chunks);
  uint64_t key = 0;
  const uint64_t mask = n == 8 ? ~uint64_t{0} : ((uint64_t{1} << (8 * n)) - 1);
  for (size_t i = 0; i < seq.ops.size(); ++i) {
    key = ((key << 8) | seq.ops[i]) & mask;
    if (i + 1 >= n) keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());

  for (size_t i = 0; i < keys.size();) {
    size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    vec.keys.push_back(keys[i]);
    vec.counts.push_back(static_cast<uint32_t>(j - i));
    i = j;
  }
  vec.total_chunks = chunks;
  return vec;
}

double cosine(const OpcodeVector& a, const OpcodeVector& b) {
  if (a.total_chunks == 0 || b.total_chunks == 0) return 0.0;
  if (a.keys == b.keys && a.counts == b.counts) return 1.0;
  const uint64_t dot = kernels::sparse_dot_u32(a.keys, a.counts, b.keys, b.counts);
  if (dot == 0) return 0.0;
  const uint64_t na = kernels::sum_sq_u32(a.counts);
  const uint64_t nb = kernels::sum_sq_u32(b.counts);
  const double sim = static_cast<double>(dot) /
                     (std::sqrt(static_cast<double>(na)) * std::sqrt(static_cast<double>(nb)));
  return std::clamp(sim, 0.0, 1.0);
}

SimilarityMatrix similarity_matrix(const std::vector<ContractBytecode>& bytecodes,
                                   unsigned n, unsigned workers) {
  if (bytecodes.empty()) throw Error("similarity_matrix: empty contract list");
  const size_t m = bytecodes.size();

  std::vector<OpcodeVector> vectors;
  vectors.reserve(m);
  SimilarityMatrix matrix;
  matrix.addresses.reserve(m);
  for (const ContractBytecode& bc : bytecodes) {
    matrix.addresses.push_back(bc.address);
    vectors.push_back(ngram_vector(disassemble(bc.code), n));
  }
  matrix.values.assign(m * m, 0.0);

  auto fill_rows = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      matrix.values[i * m + i] = 1.0;
      for (size_t j = i + 1; j < m; ++j) {
        const double sim =
            bytecodes[i].code == bytecodes[j].code ? 1.0 : cosine(vectors[i], vectors[j]);
        matrix.values[i * m + j] = sim;
        matrix.values[j * m + i] = sim;
      }
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<size_t>(workers, m));
  if (workers <= 1) {
    fill_rows(0, m);
  } else {
    // Writes are disjoint per (i, j) pair: row blocks own their mirrored
    // cells because j > i always lands in a later row's column slot.
    std::vector<std::thread> threads;
    const size_t chunk = (m + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const size_t begin = w * chunk;
      const size_t end = std::min(m, begin + chunk);
      if (begin >= end) break;
      threads.emplace_back(fill_rows, begin, end);
    }
    for (auto& t : threads) t.join();
  }
  return matrix;
}

std::vector<CloneCluster> clone_clusters(const std::vector<ContractBytecode>& bytecodes) {
  std::map<std::vector<uint8_t>, std::vector<Address>> groups;
  for (const ContractBytecode& bc : bytecodes) groups[bc.code].push_back(bc.address);

  std::vector<CloneCluster> clusters;
  for (auto& [code, addresses] : groups) {
    if (addresses.size() < 2) continue;
    std::sort(addresses.begin(), addresses.end());
    clusters.push_back({std::move(addresses), code.size()});
  }
  std::sort(clusters.begin(), clusters.end(), [](const CloneCluster& a, const CloneCluster& b) {
    if (a.addresses.size() != b.addresses.size()) return a.addresses.size() > b.addresses.size();
    return a.addresses.front() < b.addresses.front();
  });
  return clusters;
}

void write_similarity_matrix_csv(std::ostream& out, const SimilarityMatrix& matrix) {
  const size_t m = matrix.addresses.size();
  out << "address";
  for (const Address& addr : matrix.addresses) out << ',' << addr.hex();
  out << '\n';
  for (size_t i = 0; i < m; ++i) {
    out << matrix.addresses[i].hex();
    for (size_t j = 0; j < m; ++j) out << ',' << format_double(matrix.at(i, j));
    out << '\n';
  }
}

void write_clone_clusters_json(std::ostream& out, const std::vector<CloneCluster>& clusters) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const CloneCluster& cluster : clusters) {
    nlohmann::ordered_json entry;
    entry["size"] = cluster.addresses.size();
    entry["code_size_bytes"] = cluster.code_size;
    auto addrs = nlohmann::ordered_json::array();
    for (const Address& addr : cluster.addresses) addrs.push_back(addr.hex());
    entry["addresses"] = std::move(addrs);
    doc.push_back(std::move(entry));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace cyclarb
