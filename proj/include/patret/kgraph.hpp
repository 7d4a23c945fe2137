#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "patret/corpus.hpp"
#include "patret/rng.hpp"
#include "patret/types.hpp"

namespace patret {

// A <head, relation, tail> fact over dense dictionary indices.
struct Triple {
  Index head;
  Index relation;
  Index tail;

  bool operator==(const Triple&) const = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    auto mix = [](std::uint64_t z) {
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      return z ^ (z >> 31);
    };
    std::uint64_t h = mix(static_cast<std::uint64_t>(t.head) + 0x1000);
    h ^= mix(static_cast<std::uint64_t>(t.relation) + 0x2000) + 0x9e3779b97f4a7c15ull + (h << 6);
    h ^= mix(static_cast<std::uint64_t>(t.tail) + 0x3000) + 0x9e3779b97f4a7c15ull + (h << 6);
    return static_cast<std::size_t>(h);
  }
};

// string <-> dense index bijection, insertion-ordered (deterministic builds).
struct Dictionary {
  std::vector<std::string> keys;
  std::unordered_map<std::string, Index> ids;

  Index size() const { return static_cast<Index>(keys.size()); }

  Index add_or_get(const std::string& key) {
    auto [it, inserted] = ids.try_emplace(key, static_cast<Index>(keys.size()));
    if (inserted) keys.push_back(key);
    return it->second;
  }

  // -1 if absent
  Index get(const std::string& key) const {
    auto it = ids.find(key);
    return it == ids.end() ? Index(-1) : it->second;
  }
};

// Immutable after build. Corruption takes an explicit caller-owned RNG, so
// parallel workers never share mutable state.
struct TripleStore {
  std::vector<Triple> triples;
  Dictionary entities;
  Dictionary relations;
  std::unordered_set<Triple, TripleHash> positive_set;

  // Entities seen in head / tail position, for type-constrained sampling.
  std::vector<Index> head_pool;
  std::vector<Index> tail_pool;

  bool is_positive(const Triple& t) const { return positive_set.count(t) != 0; }
  void add_triple(const Triple& t);
};

// Citation graph: triples <citing, cite, cited>, entities are patents.
TripleStore build_graph(const std::vector<CitationEdge>& edges);

// Inventor graph: triples <inventor, write, patent>, entities are the union
// of inventors and patents, sharing one dictionary.
TripleStore build_graph(const std::vector<InventorEdge>& edges);

enum class CorruptSide { head, tail, uniform };

// Returns a corrupted copy of `triple` differing in exactly one slot and
// absent from the positive set ("filtered" negative). Replacement entities
// are drawn uniformly from the full dictionary unless type_constrained, in
// which case heads come from head_pool and tails from tail_pool. Throws
// Errc::exhausted_retries after 100 rejected draws.
Triple corrupt(const Triple& triple, const TripleStore& store,
               CorruptSide side, Rng& rng, bool type_constrained = false);

// Interchange dump: head_key \t relation \t tail_key
void save_triples(const TripleStore& store, const std::string& path);

}  // namespace patret
