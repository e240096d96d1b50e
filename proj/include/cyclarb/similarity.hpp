#pragma once

#include "cyclarb/types.hpp"

#include <iosfwd>
#include <span>

namespace cyclarb {

namespace evm {

/// One row of the instruction table (Shanghai revision, PUSH0 included).
struct OpcodeInfo {
  std::string_view name;  // "INVALID" for unassigned bytes
  uint8_t operand_bytes;  // 1..32 for the PUSH family, else 0
  bool assigned;
};

const std::array<OpcodeInfo, 256>& opcode_table();

/// Maps a raw byte to its canonical opcode id: assigned bytes map to
/// themselves, unassigned bytes collapse onto 0xfe (INVALID) so n-grams
/// over ids equal n-grams over mnemonics.
uint8_t canonical_opcode(uint8_t byte);

std::string_view mnemonic(uint8_t opcode_id);

inline constexpr uint8_t kInvalidOpcode = 0xfe;

}  // namespace evm

/// Disassembled instruction stream: canonical opcode ids in code order,
/// operand data removed.
struct OpcodeSeq {
  std::vector<uint8_t> ops;

  bool operator==(const OpcodeSeq&) const = default;
};

/// Linear-scan disassembly. PUSH1..PUSH32 consume 1..32 operand bytes
/// (discarded); a PUSH truncated by the end of code keeps its mnemonic and
/// ends the scan; unassigned bytes become INVALID. Total function: any
/// byte string disassembles.
OpcodeSeq disassemble(std::span<const uint8_t> code);

/// Sparse n-gram frequency vector over the opcode stream, stored as
/// parallel sorted arrays (chunk key, count). Empty when the stream is
/// shorter than n. Supported window sizes are 1..8 (a chunk key packs
/// exactly into 64 bits); other n throw Error.
struct OpcodeVector {
  std::vector<uint64_t> keys;   // sorted, duplicate-free
  std::vector<uint32_t> counts; // parallel to keys, all positive
  uint64_t total_chunks = 0;    // sum of counts == max(0, len - n + 1)

  bool operator==(const OpcodeVector&) const = default;
};

OpcodeVector ngram_vector(const OpcodeSeq& seq, unsigned n = 5);

/// Cosine similarity over sparse count vectors, clamped to [0, 1]. Equal
/// non-empty vectors compare as exactly 1.0. An empty vector (fewer than n
/// opcodes) yields 0.0 against anything; byte-identical contracts are
/// handled upstream by similarity_matrix, which reports exactly 1.0 for
/// them regardless of vector content.
double cosine(const OpcodeVector& a, const OpcodeVector& b);

struct SimilarityMatrix {
  std::vector<Address> addresses;
  std::vector<double> values;  // row-major, size addresses.size()^2

  double at(size_t i, size_t j) const { return values[i * addresses.size() + j]; }
};

/// Pairwise cosine similarities. Diagonal is exactly 1.0; byte-identical
/// codes score exactly 1.0; the matrix is symmetric by construction. Rows
/// are filled in parallel across `workers` threads.
SimilarityMatrix similarity_matrix(const std::vector<ContractBytecode>& bytecodes,
                                   unsigned n = 5, unsigned workers = 1);

struct CloneCluster {
  std::vector<Address> addresses;  // sorted; always >= 2 entries
  size_t code_size = 0;            // bytes
};

/// Groups contracts sharing byte-identical code; singleton groups are
/// omitted. Clusters are ordered by size descending, then first address.
std::vector<CloneCluster> clone_clusters(const std::vector<ContractBytecode>& bytecodes);

void write_similarity_matrix_csv(std::ostream& out, const SimilarityMatrix& matrix);
void write_clone_clusters_json(std::ostream& out, const std::vector<CloneCluster>& clusters);

}  // namespace cyclarb
