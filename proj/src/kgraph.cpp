#include "patret/kgraph.hpp"

#include <vector>

#include "patret/error.hpp"
#include "patret/tsv.hpp"

namespace patret {

void TripleStore::add_triple(const Triple& t) {
  if (positive_set.insert(t).second) triples.push_back(t);
}

namespace {

void build_pools(TripleStore& store) {
  std::vector<char> is_head(static_cast<std::size_t>(store.entities.size()), 0);
  std::vector<char> is_tail(static_cast<std::size_t>(store.entities.size()), 0);
  for (const auto& t : store.triples) {
    is_head[static_cast<std::size_t>(t.head)] = 1;
    is_tail[static_cast<std::size_t>(t.tail)] = 1;
  }
  for (Index e = 0; e < store.entities.size(); ++e) {
    if (is_head[static_cast<std::size_t>(e)]) store.head_pool.push_back(e);
    if (is_tail[static_cast<std::size_t>(e)]) store.tail_pool.push_back(e);
  }
}

}  // namespace

TripleStore build_graph(const std::vector<CitationEdge>& edges) {
  if (edges.empty()) fail(Errc::empty_graph, "no citation edges");
  TripleStore store;
  const Index cite = store.relations.add_or_get("cite");
  for (const auto& e : edges) {
    const Index h = store.entities.add_or_get(e.citing);
    const Index t = store.entities.add_or_get(e.cited);
    store.add_triple({h, cite, t});
  }
  build_pools(store);
  return store;
}

TripleStore build_graph(const std::vector<InventorEdge>& edges) {
  if (edges.empty()) fail(Errc::empty_graph, "no inventor edges");
  TripleStore store;
  const Index write = store.relations.add_or_get("write");
  for (const auto& e : edges) {
    const Index h = store.entities.add_or_get(e.inventor_id);
    const Index t = store.entities.add_or_get(e.patent_id);
    store.add_triple({h, write, t});
  }
  build_pools(store);
  return store;
}

Triple corrupt(const Triple& triple, const TripleStore& store,
               CorruptSide side, Rng& rng, bool type_constrained) {
  const Index num_entities = store.entities.size();
  if (num_entities < 2)
    fail(Errc::exhausted_retries, "graph has fewer than 2 entities");

  constexpr int kMaxDraws = 100;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    const bool corrupt_head =
        side == CorruptSide::head ||
        (side == CorruptSide::uniform && coin(rng));
    const std::vector<Index>* pool = nullptr;
    if (type_constrained)
      pool = corrupt_head ? &store.head_pool : &store.tail_pool;

    Index replacement;
    if (pool) {
      if (pool->empty()) continue;
      replacement = (*pool)[uniform_index(rng, pool->size())];
    } else {
      replacement = static_cast<Index>(
          uniform_index(rng, static_cast<std::size_t>(num_entities)));
    }

    Triple candidate = triple;
    (corrupt_head ? candidate.head : candidate.tail) = replacement;
    if (!store.is_positive(candidate)) return candidate;
  }
  fail(Errc::exhausted_retries,
       "no negative found in 100 draws (graph near-complete)");
}

void save_triples(const TripleStore& store, const std::string& path) {
  auto out = open_output(path);
  for (const auto& t : store.triples) {
    out << store.entities.keys[static_cast<std::size_t>(t.head)] << '\t'
        << store.relations.keys[static_cast<std::size_t>(t.relation)] << '\t'
        << store.entities.keys[static_cast<std::size_t>(t.tail)] << '\n';
  }
}

}  // namespace patret
