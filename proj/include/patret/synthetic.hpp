#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "patret/corpus.hpp"
#include "patret/kgraph.hpp"
#include "patret/types.hpp"
#include "patret/vector_table.hpp"

namespace patret {

// Seeded fixture generators shared by the demo-synthetic subcommand and the
// acceptance suite.

// --- clustered citation graph ------------------------------------------

struct ClusterGraphConfig {
  std::size_t entities = 200;
  std::size_t clusters = 4;
  Real p_within = 0.3;
  Real p_across = 0.005;
  std::uint64_t seed = 7;
};

// Dense within-cluster citation, sparse across; entity keys "E000"...
std::vector<CitationEdge> make_cluster_citation_graph(const ClusterGraphConfig& config);

struct EdgeSplit {
  std::vector<CitationEdge> train;
  std::vector<CitationEdge> held_out;
};

// Moves n_holdout edges out of the set such that every entity still
// appears in the training remainder (held-out triples then reference
// known entities).
EdgeSplit split_holdout_edges(const std::vector<CitationEdge>& edges,
                              std::size_t n_holdout, std::uint64_t seed);

// Maps held-out edges onto triples over the training store's dictionaries.
std::vector<Triple> edges_to_triples(const std::vector<CitationEdge>& edges,
                                     const TripleStore& store);

// --- labeled embedding blocks ------------------------------------------

struct LabeledBlocksConfig {
  std::size_t examples = 200;
  Index labels = 8;
  Index block_dim = 16;
  Real signal_scale = 1.0;
  Real noise_std = 0.3;
  // which of A/B/C carry the label prototype ("B", "ABC", ...)
  std::string signal_blocks = "B";
  std::uint64_t seed = 7;
};

struct LabeledBlocks {
  CorpusIndex corpus;  // one single-label patent per example
  VectorTable text;      // A
  VectorTable citation;  // B
  VectorTable inventor;  // C
};

// Examples with balanced single labels; signal blocks embed a per-label
// prototype direction plus noise, the rest are pure noise.
LabeledBlocks make_labeled_blocks(const LabeledBlocksConfig& config);

// --- recall cluster fixture --------------------------------------------

struct RecallFixtureConfig {
  std::size_t seeds = 6;
  std::size_t holdout = 12;
  std::size_t distractors_per_seed = 2;
  std::size_t background = 60;
  Index dim = 24;
  Real seed_angle_deg = 35;  // seeds fanned this far from the cluster centre
  std::uint64_t seed = 7;
};

struct RecallFixture {
  VectorTable universe;
  std::vector<std::string> seed_ids;
  std::vector<std::string> holdout_ids;
};

// One tight cluster (seeds fanned around the centre, holdout at the
// centre) plus distractors hugging exactly one seed each and random
// background. Mean aggregation ranks the holdout first; max prefers the
// distractors.
RecallFixture make_recall_fixture(const RecallFixtureConfig& config);

// --- full demo world ----------------------------------------------------

struct DemoConfig {
  std::size_t clusters = 4;
  std::size_t patents_per_cluster = 30;
  std::size_t inventors_per_cluster = 8;
  std::size_t seed_count = 8;
  std::size_t holdout_count = 15;
  std::uint64_t seed = 42;
};

struct DemoData {
  CorpusIndex corpus;
  std::vector<CitationEdge> citations;
  std::vector<InventorEdge> inventors;
  std::vector<std::string> seed_ids;     // from cluster 0
  std::vector<std::string> holdout_ids;  // rest of cluster 0
  std::vector<std::string> keywords;     // cluster-0 phrases for the concept diff
};

// A small themed corpus: clustered vocabulary for titles/abstracts,
// cluster-aligned CPC codes, citation/inventor edges dense within clusters.
DemoData make_demo_corpus(const DemoConfig& config);

}  // namespace patret
