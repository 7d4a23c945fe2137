#pragma once

#include <array>
#include <string>
#include <vector>

#include "patret/corpus.hpp"
#include "patret/types.hpp"
#include "patret/vector_table.hpp"

namespace patret {

// The three embedding facets of a patent.
enum class Block { text, citation, inventor };  // A, B, C

constexpr char block_letter(Block b) {
  switch (b) {
    case Block::text:     return 'A';
    case Block::citation: return 'B';
    case Block::inventor: return 'C';
  }
  return '?';
}

enum class FusionOp { concat, add };

// One of the eleven schemes: an ordered non-empty subset of {A, B, C}
// combined by concatenation or elementwise addition.
struct FusionSpec {
  std::vector<Block> parts;  // ordered A before B before C
  FusionOp op = FusionOp::concat;

  void validate() const;
  std::string to_string() const;          // "A", "A+B", "[A,B,C]"
  static FusionSpec parse(const std::string& text);
};

// The canonical eleven specs, in presentation order:
// A, B, C, A+B, B+C, A+C, A+B+C, [A,B], [B,C], [A,C], [A,B,C].
std::vector<FusionSpec> all_fusion_specs();

enum class MissingPolicy { error, zero };

struct FusedVector {
  std::string patent_id;
  Vector vector;
  FusionSpec spec;
  unsigned missing_mask = 0;  // bit i set when parts[i] was zero-filled

  bool complete() const { return missing_mask == 0; }
};

// Per-facet source tables; every part named by a spec must be present.
struct BlockTables {
  const VectorTable* text = nullptr;
  const VectorTable* citation = nullptr;
  const VectorTable* inventor = nullptr;

  const VectorTable& get(Block b) const;
};

// Fuses one patent. Concat appends blocks in A,B,C order; add sums equal-
// dimension blocks. A missing block either aborts (MissingEmbedding) or is
// zero-substituted and flagged, per policy. normalize_blocks rescales each
// present block to unit norm first (off by default).
FusedVector fuse(const FusionSpec& spec, const std::string& patent_id,
                 const BlockTables& tables, MissingPolicy policy,
                 bool normalize_blocks = false);

struct CoverageReport {
  std::size_t total = 0;
  std::size_t flagged = 0;  // vectors with at least one zero-filled block
  std::array<std::size_t, 3> missing_by_block{0, 0, 0};  // indexed A,B,C
};

struct FusedTable {
  FusionSpec spec;
  VectorTable table;  // one row per corpus patent, corpus order
  CoverageReport coverage;
};

FusedTable fuse_all(const FusionSpec& spec, const CorpusIndex& corpus,
                    const BlockTables& tables, MissingPolicy policy,
                    bool normalize_blocks = false);

// Sidecar manifest (JSON) recording the spec behind a persisted fused table.
void save_fusion_manifest(const FusedTable& fused, const std::string& path);

}  // namespace patret
