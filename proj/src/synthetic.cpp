#include "patret/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "patret/error.hpp"
#include "patret/rng.hpp"

namespace patret {

namespace {

std::string padded_key(const char* prefix, std::size_t i, std::size_t width) {
  std::string digits = std::to_string(i);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

std::size_t key_width(std::size_t count) {
  std::size_t w = 1, c = 10;
  while (c < count) {
    ++w;
    c *= 10;
  }
  return w;
}

}  // namespace

std::vector<CitationEdge> make_cluster_citation_graph(const ClusterGraphConfig& config) {
  if (config.entities < config.clusters || config.clusters == 0)
    fail(Errc::invalid_argument, "bad cluster graph config");
  Rng rng(config.seed);
  const std::size_t width = key_width(config.entities);
  const std::size_t per_cluster = config.entities / config.clusters;

  const auto cluster_of = [&](std::size_t i) {
    return std::min(i / per_cluster, config.clusters - 1);
  };

  std::vector<CitationEdge> edges;
  for (std::size_t i = 0; i < config.entities; ++i) {
    for (std::size_t j = 0; j < config.entities; ++j) {
      if (i == j) continue;
      const Real p =
          cluster_of(i) == cluster_of(j) ? config.p_within : config.p_across;
      if (unit_real(rng) < p)
        edges.push_back({padded_key("E", i, width), padded_key("E", j, width)});
    }
  }
  return edges;
}

EdgeSplit split_holdout_edges(const std::vector<CitationEdge>& edges,
                              std::size_t n_holdout, std::uint64_t seed) {
  if (n_holdout >= edges.size())
    fail(Errc::invalid_argument, "holdout would consume the whole edge set");

  std::map<std::string, std::size_t> degree;
  for (const auto& e : edges) {
    ++degree[e.citing];
    ++degree[e.cited];
  }

  Rng rng(seed);
  auto order = shuffled_indices(edges.size(), rng);

  EdgeSplit split;
  std::vector<char> taken(edges.size(), 0);
  for (std::size_t idx : order) {
    if (split.held_out.size() >= n_holdout) break;
    const auto& e = edges[idx];
    // keep every entity covered by at least one training edge
    if (degree[e.citing] < 2 || degree[e.cited] < 2) continue;
    --degree[e.citing];
    --degree[e.cited];
    split.held_out.push_back(e);
    taken[idx] = 1;
  }
  if (split.held_out.size() < n_holdout)
    fail(Errc::invalid_argument, "graph too sparse to hold out " +
                                     std::to_string(n_holdout) + " edges");
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (!taken[i]) split.train.push_back(edges[i]);
  return split;
}

std::vector<Triple> edges_to_triples(const std::vector<CitationEdge>& edges,
                                     const TripleStore& store) {
  const Index relation = store.relations.get("cite");
  if (relation < 0) fail(Errc::invalid_argument, "store has no 'cite' relation");
  std::vector<Triple> triples;
  triples.reserve(edges.size());
  for (const auto& e : edges) {
    const Index h = store.entities.get(e.citing);
    const Index t = store.entities.get(e.cited);
    if (h < 0 || t < 0)
      fail(Errc::invalid_argument,
           "edge " + e.citing + "->" + e.cited + " references unknown entities");
    triples.push_back({h, relation, t});
  }
  return triples;
}

LabeledBlocks make_labeled_blocks(const LabeledBlocksConfig& config) {
  if (config.block_dim < config.labels)
    fail(Errc::invalid_argument, "block_dim must be >= labels");
  Rng rng(config.seed);
  const std::size_t width = key_width(config.examples);

  LabeledBlocks out;
  out.text.vectors.resize(static_cast<Index>(config.examples), config.block_dim);
  out.citation.vectors = out.text.vectors;
  out.inventor.vectors = out.text.vectors;

  const auto has_signal = [&](char block) {
    return config.signal_blocks.find(block) != std::string::npos;
  };

  for (std::size_t i = 0; i < config.examples; ++i) {
    const std::string id = padded_key("S", i, width);
    const auto label = static_cast<Index>(i % static_cast<std::size_t>(config.labels));

    PatentRecord rec;
    rec.patent_id = id;
    rec.title = "sample " + std::to_string(i);
    rec.cpc_codes = {padded_key("L", static_cast<std::size_t>(label), 2)};
    out.corpus.patent_order.emplace(id, static_cast<Index>(i));
    out.corpus.patents.push_back(std::move(rec));

    const auto fill = [&](VectorTable& table, char name) {
      Vector v(config.block_dim);
      for (Index j = 0; j < config.block_dim; ++j)
        v(j) = normal(rng, 0, config.noise_std);
      if (has_signal(name)) v(label) += config.signal_scale;
      table.vectors.row(static_cast<Index>(i)) = v.transpose();
      table.keys.push_back(id);
      table.index.emplace(id, static_cast<Index>(i));
    };
    fill(out.text, 'A');
    fill(out.citation, 'B');
    fill(out.inventor, 'C');
  }

  std::set<std::string> codes;
  for (const auto& rec : out.corpus.patents)
    codes.insert(rec.cpc_codes.begin(), rec.cpc_codes.end());
  out.corpus.label_space.assign(codes.begin(), codes.end());
  return out;
}

RecallFixture make_recall_fixture(const RecallFixtureConfig& config) {
  if (config.dim < static_cast<Index>(config.seeds) + 1)
    fail(Errc::invalid_argument, "dim must exceed the seed count");
  Rng rng(config.seed);
  const Real angle = config.seed_angle_deg * 3.14159265358979323846 / 180.0;

  RecallFixture fix;
  std::vector<std::pair<std::string, Vector>> rows;

  // axis 0 is the cluster centre; axes 1..seeds fan the seeds out
  for (std::size_t s = 0; s < config.seeds; ++s) {
    Vector v = Vector::Zero(config.dim);
    v(0) = std::cos(angle);
    v(static_cast<Index>(s) + 1) = std::sin(angle);
    const std::string id = padded_key("SEED", s, 2);
    fix.seed_ids.push_back(id);
    rows.emplace_back(id, v);
  }

  // holdout: the cluster centre plus tiny noise
  for (std::size_t h = 0; h < config.holdout; ++h) {
    Vector v = Vector::Zero(config.dim);
    v(0) = 1;
    for (Index j = 0; j < config.dim; ++j) v(j) += normal(rng, 0, 0.01);
    v /= v.norm();
    const std::string id = padded_key("HOLD", h, 3);
    fix.holdout_ids.push_back(id);
    rows.emplace_back(id, v);
  }

  // distractors hug exactly one seed each
  std::size_t d = 0;
  for (std::size_t s = 0; s < config.seeds; ++s) {
    for (std::size_t k = 0; k < config.distractors_per_seed; ++k) {
      Vector v = rows[s].second;
      for (Index j = 0; j < config.dim; ++j) v(j) += normal(rng, 0, 0.005);
      v /= v.norm();
      rows.emplace_back(padded_key("DIST", d++, 3), v);
    }
  }

  for (std::size_t b = 0; b < config.background; ++b) {
    Vector v(config.dim);
    for (Index j = 0; j < config.dim; ++j) v(j) = normal(rng, 0, 1);
    v /= v.norm();
    // keep the background away from the cluster axis
    v(0) = std::abs(v(0)) * 0.1;
    v /= v.norm();
    rows.emplace_back(padded_key("BG", b, 3), v);
  }

  fix.universe.vectors.resize(static_cast<Index>(rows.size()),
                              static_cast<Index>(config.dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    fix.universe.vectors.row(static_cast<Index>(i)) = rows[i].second.transpose();
    fix.universe.keys.push_back(rows[i].first);
    fix.universe.index.emplace(rows[i].first, static_cast<Index>(i));
  }
  return fix;
}

namespace {

struct ClusterVocab {
  const char* code;                      // CPC-like label
  std::vector<const char*> adjectives;
  std::vector<const char*> nouns;
};

const std::vector<ClusterVocab>& demo_vocab() {
  static const std::vector<ClusterVocab> vocab = {
      {"A63",
       {"rolling", "spherical", "self-propelled", "magnetic", "remote", "hollow"},
       {"toy", "sphere", "shell", "motor", "wheel", "casing", "robot", "drive",
        "controller", "sensor", "axle", "housing"}},
      {"C09",
       {"curable", "polymeric", "protective", "aqueous", "crosslinked", "thermal"},
       {"coating", "resin", "polyester", "container", "layer", "substrate",
        "solvent", "film", "mixture", "binder", "pigment", "surface"}},
      {"A61",
       {"intervertebral", "expandable", "threaded", "surgical", "locking", "bony"},
       {"screw", "cage", "implant", "plate", "staple", "spine", "disc",
        "fastener", "guide", "prong", "anchor", "joint"}},
      {"G02",
       {"optical", "refractive", "coherent", "polarized", "focal", "tunable"},
       {"lens", "beam", "waveguide", "mirror", "laser", "fiber", "grating",
        "detector", "prism", "filter", "aperture", "array"}},
  };
  return vocab;
}

std::string pick(const std::vector<const char*>& pool, Rng& rng) {
  return pool[uniform_index(rng, pool.size())];
}

std::string demo_sentence(const ClusterVocab& vocab, Rng& rng, std::size_t words) {
  std::string s;
  for (std::size_t w = 0; w < words; ++w) {
    if (w > 0) s += ' ';
    s += (w % 3 == 0) ? pick(vocab.adjectives, rng) : pick(vocab.nouns, rng);
  }
  return s;
}

}  // namespace

DemoData make_demo_corpus(const DemoConfig& config) {
  const auto& vocab = demo_vocab();
  if (config.clusters == 0 || config.clusters > vocab.size())
    fail(Errc::invalid_argument,
         "demo supports 1.." + std::to_string(vocab.size()) + " clusters");
  const std::size_t n = config.clusters * config.patents_per_cluster;
  if (config.seed_count + config.holdout_count > config.patents_per_cluster)
    fail(Errc::invalid_argument, "seed_count + holdout_count exceeds cluster size");

  Rng rng(config.seed);
  const std::size_t width = key_width(n);

  DemoData demo;
  std::set<std::string> codes;

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cluster = i / config.patents_per_cluster;
    const auto& cv = vocab[cluster];

    PatentRecord rec;
    rec.patent_id = padded_key("P", i, width);
    rec.title = demo_sentence(cv, rng, 3 + uniform_index(rng, 3));
    rec.abstract = demo_sentence(cv, rng, 10 + uniform_index(rng, 12));
    rec.cpc_codes.insert(cv.code);
    if (unit_real(rng) < 0.2)  // occasional cross-domain secondary code
      rec.cpc_codes.insert(vocab[uniform_index(rng, config.clusters)].code);
    codes.insert(rec.cpc_codes.begin(), rec.cpc_codes.end());

    demo.corpus.patent_order.emplace(rec.patent_id,
                                     static_cast<Index>(demo.corpus.patents.size()));
    demo.corpus.patents.push_back(std::move(rec));
  }
  demo.corpus.label_space.assign(codes.begin(), codes.end());

  // citations: dense within a cluster, occasional cross-cluster
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cluster = i / config.patents_per_cluster;
    const std::size_t base = cluster * config.patents_per_cluster;
    const std::size_t cites = 3 + uniform_index(rng, 4);
    for (std::size_t c = 0; c < cites; ++c) {
      const bool within = unit_real(rng) < 0.92;
      const std::size_t j = within
                                ? base + uniform_index(rng, config.patents_per_cluster)
                                : uniform_index(rng, n);
      if (i == j || !seen.insert({i, j}).second) continue;
      demo.citations.push_back(
          {demo.corpus.patents[i].patent_id, demo.corpus.patents[j].patent_id});
    }
  }

  // inventors own several patents, almost always within one cluster
  const std::size_t n_inventors = config.clusters * config.inventors_per_cluster;
  const std::size_t iwidth = key_width(n_inventors);
  std::set<std::pair<std::size_t, std::size_t>> owned;
  for (std::size_t v = 0; v < n_inventors; ++v) {
    const std::size_t cluster = v / config.inventors_per_cluster;
    const std::size_t base = cluster * config.patents_per_cluster;
    const std::size_t portfolio = 2 + uniform_index(rng, 5);
    for (std::size_t k = 0; k < portfolio; ++k) {
      const bool within = unit_real(rng) < 0.9;
      const std::size_t j = within
                                ? base + uniform_index(rng, config.patents_per_cluster)
                                : uniform_index(rng, n);
      if (!owned.insert({v, j}).second) continue;
      demo.inventors.push_back(
          {padded_key("I", v, iwidth), demo.corpus.patents[j].patent_id});
    }
  }

  for (std::size_t s = 0; s < config.seed_count; ++s)
    demo.seed_ids.push_back(demo.corpus.patents[s].patent_id);
  for (std::size_t h = 0; h < config.holdout_count; ++h)
    demo.holdout_ids.push_back(
        demo.corpus.patents[config.seed_count + h].patent_id);

  demo.keywords = {"rolling toy", "spherical robot"};
  return demo;
}

}  // namespace patret
