#pragma once

#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "patret/types.hpp"

namespace patret {

// One row of the patent table.
struct PatentRecord {
  std::string patent_id;
  std::string title;
  std::string abstract;
  std::set<std::string> cpc_codes;  // may be empty during pure retrieval runs
};

struct CitationEdge {
  std::string citing;
  std::string cited;
};

struct InventorEdge {
  std::string inventor_id;
  std::string patent_id;
};

enum class EdgeKind { citation, inventor };

// Immutable after load; safe for concurrent readers.
struct CorpusIndex {
  std::vector<PatentRecord> patents;               // in file order
  std::unordered_map<std::string, Index> patent_order;  // id -> dense [0, N)
  std::vector<std::string> label_space;            // sorted distinct codes

  Index size() const { return static_cast<Index>(patents.size()); }
  bool contains(const std::string& id) const { return patent_order.count(id) != 0; }

  const PatentRecord* find(const std::string& id) const {
    auto it = patent_order.find(id);
    return it == patent_order.end() ? nullptr : &patents[static_cast<std::size_t>(it->second)];
  }
};

struct EdgeLoadReport {
  std::size_t rows = 0;            // well-formed data rows seen
  std::size_t duplicates = 0;      // dropped duplicate pairs
  std::size_t self_loops = 0;      // citation rows with citing == cited, dropped
  std::size_t skipped = 0;         // malformed rows skipped under lenient
  std::size_t dangling = 0;        // edges with an endpoint outside the corpus (kept)
};

struct ValidationReport {
  std::size_t patent_count = 0;
  std::size_t label_count = 0;
  std::size_t citation_edges = 0;
  std::size_t inventor_edges = 0;
  std::size_t citation_dangling = 0;
  std::size_t inventor_dangling = 0;
  std::size_t citation_isolated = 0;  // corpus patents on no citation edge
  std::size_t inventor_isolated = 0;  // corpus patents on no inventor edge

  std::string to_string() const;
};

// Loads the patent table. TSV with header
//   patent_id<TAB>title<TAB>abstract<TAB>cpc_codes
// where cpc_codes is ';'-joined (possibly empty). Malformed rows abort
// unless lenient (then they are skipped and counted); duplicate ids always
// abort. `skipped` reports lenient skips when non-null.
CorpusIndex load_patents(const std::string& path, bool lenient = false,
                         std::size_t* skipped = nullptr);

// Writes a corpus back out in the same format (round-trips exactly).
void save_patents(const CorpusIndex& corpus, const std::string& path);

void save_citation_edges(const std::vector<CitationEdge>& edges,
                         const std::string& path);
void save_inventor_edges(const std::vector<InventorEdge>& edges,
                         const std::string& path);

std::vector<CitationEdge> load_citation_edges(const std::string& path,
                                              bool lenient = false,
                                              EdgeLoadReport* report = nullptr,
                                              const CorpusIndex* corpus = nullptr);

std::vector<InventorEdge> load_inventor_edges(const std::string& path,
                                              bool lenient = false,
                                              EdgeLoadReport* report = nullptr,
                                              const CorpusIndex* corpus = nullptr);

ValidationReport validate_corpus(const CorpusIndex& corpus,
                                 const std::vector<CitationEdge>& citations,
                                 const std::vector<InventorEdge>& inventors);

}  // namespace patret
