#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "patret/types.hpp"

namespace patret {

// A keyed set of equal-dimension dense vectors: text embeddings, trained
// entity embeddings, fused patent vectors. Rows of `vectors` align with
// `keys`; `index` is the inverse map.
struct VectorTable {
  std::vector<std::string> keys;
  std::unordered_map<std::string, Index> index;
  Matrix vectors;  // keys.size() x dim

  Index size() const { return static_cast<Index>(keys.size()); }
  Index dim() const { return vectors.cols(); }

  bool contains(const std::string& key) const { return index.count(key) != 0; }

  // Row index for key, or -1.
  Index find(const std::string& key) const {
    auto it = index.find(key);
    return it == index.end() ? Index(-1) : it->second;
  }

  // Appends a row. Throws Errc::duplicate_key / Errc::dim_mismatch.
  void add(const std::string& key, const Vector& v);

  void rebuild_index();
};

// Bundles parallel keys/rows into a table (keys.size() must match rows).
VectorTable make_table(std::vector<std::string> keys, Matrix vectors);

// Binary persistence, shared by every embedding producer/consumer.
// Layout (little-endian): magic "PEMB", version u32, count u64, dim u32,
// then per record: key_len u16, key bytes (UTF-8), dim x float32.
void save_table(const VectorTable& table, const std::string& path);
VectorTable load_table(const std::string& path);

// TSV debug format: key \t v1,v2,...  (float32 round-trip precision).
void save_table_tsv(const VectorTable& table, const std::string& path);
VectorTable load_table_tsv(const std::string& path);

}  // namespace patret
