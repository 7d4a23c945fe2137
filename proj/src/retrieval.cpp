#include "patret/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "patret/tsv.hpp"

namespace patret {

const char* aggregation_name(Aggregation a) {
  switch (a) {
    case Aggregation::mean:   return "mean";
    case Aggregation::median: return "median";
    case Aggregation::min:    return "min";
    case Aggregation::max:    return "max";
  }
  return "?";
}

Aggregation parse_aggregation(const std::string& name) {
  if (name == "mean") return Aggregation::mean;
  if (name == "median") return Aggregation::median;
  if (name == "min") return Aggregation::min;
  if (name == "max") return Aggregation::max;
  fail(Errc::invalid_argument, "unknown aggregation '" + name + "'");
}

Real aggregate(std::span<const Real> scores, Aggregation method) {
  if (scores.empty()) fail(Errc::empty_scores, "aggregate over empty score list");
  switch (method) {
    case Aggregation::mean: {
      Real sum = 0;
      for (Real s : scores) sum += s;
      return sum / static_cast<Real>(scores.size());
    }
    case Aggregation::median: {
      std::vector<Real> sorted(scores.begin(), scores.end());
      std::sort(sorted.begin(), sorted.end());
      const std::size_t n = sorted.size();
      if (n % 2 == 1) return sorted[n / 2];
      return (sorted[n / 2 - 1] + sorted[n / 2]) / 2;
    }
    case Aggregation::min: return *std::min_element(scores.begin(), scores.end());
    case Aggregation::max: return *std::max_element(scores.begin(), scores.end());
  }
  fail(Errc::invalid_argument, "bad aggregation");
}

SeedSet SeedSet::create(const std::vector<std::string>& ids,
                        const VectorTable& universe) {
  if (ids.empty()) fail(Errc::invalid_argument, "seed set is empty");
  SeedSet seeds;
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second)
      fail(Errc::invalid_argument, "duplicate seed '" + id + "'");
    if (!universe.contains(id))
      fail(Errc::missing_embedding, "seed '" + id + "' has no embedding");
    seeds.patent_ids.push_back(id);
  }
  return seeds;
}

bool SeedSet::contains(const std::string& id) const {
  return std::find(patent_ids.begin(), patent_ids.end(), id) != patent_ids.end();
}

std::vector<std::string> load_id_file(const std::string& path) {
  std::vector<std::string> ids;
  for_each_line(path, [&](std::size_t, const std::string& line) {
    if (!line.empty()) ids.push_back(line);
  });
  return ids;
}

std::vector<RankedResult> rank_targets(const SeedSet& seeds,
                                       const VectorTable& universe,
                                       Aggregation method, int threads,
                                       std::size_t* zero_vector_targets) {
  const Index dim = universe.dim();
  const Index n_seeds = static_cast<Index>(seeds.patent_ids.size());

  // Unit-normalized seed matrix; a zero seed vector is a caller error.
  Matrix seed_rows(n_seeds, dim);
  for (Index s = 0; s < n_seeds; ++s) {
    const Index row = universe.find(seeds.patent_ids[static_cast<std::size_t>(s)]);
    const Real n = universe.vectors.row(row).norm();
    if (n == 0)
      fail(Errc::zero_vector,
           "seed '" + seeds.patent_ids[static_cast<std::size_t>(s)] +
               "' has a zero vector");
    seed_rows.row(s) = universe.vectors.row(row) / n;
  }

  std::vector<Index> targets;
  targets.reserve(static_cast<std::size_t>(universe.size()));
  for (Index i = 0; i < universe.size(); ++i)
    if (!seeds.contains(universe.keys[static_cast<std::size_t>(i)]))
      targets.push_back(i);

  std::vector<RankedResult> results(targets.size());
  std::size_t zero_targets = 0;

  const auto score_range = [&](std::size_t lo, std::size_t hi,
                               std::size_t* zero_count) {
    std::vector<Real> cosines(static_cast<std::size_t>(n_seeds));
    for (std::size_t i = lo; i < hi; ++i) {
      const Index row = targets[i];
      RankedResult& out = results[i];
      out.patent_id = universe.keys[static_cast<std::size_t>(row)];
      const Real n = universe.vectors.row(row).norm();
      if (n == 0) {
        out.score = -std::numeric_limits<Real>::infinity();
        ++*zero_count;
        continue;
      }
      const Vector sims = seed_rows * (universe.vectors.row(row).transpose() / n);
      for (Index s = 0; s < n_seeds; ++s)
        cosines[static_cast<std::size_t>(s)] = sims(s);
      out.score = aggregate(cosines, method);
    }
  };

  if (threads <= 1 || targets.size() < 256) {
    score_range(0, targets.size(), &zero_targets);
  } else {
    const std::size_t workers = static_cast<std::size_t>(threads);
    std::vector<std::size_t> zero_counts(workers, 0);
    std::vector<std::thread> pool;
    const std::size_t chunk = (targets.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(targets.size(), lo + chunk);
        if (lo < hi) score_range(lo, hi, &zero_counts[w]);
      });
    }
    for (auto& th : pool) th.join();
    for (std::size_t z : zero_counts) zero_targets += z;
  }

  std::sort(results.begin(), results.end(),
            [](const RankedResult& x, const RankedResult& y) {
              if (x.score != y.score) return x.score > y.score;
              return x.patent_id < y.patent_id;
            });
  for (std::size_t i = 0; i < results.size(); ++i) results[i].rank = i + 1;

  if (zero_vector_targets) *zero_vector_targets = zero_targets;
  return results;
}

std::vector<RankedResult> retrieve_top_k(const SeedSet& seeds,
                                         const VectorTable& universe,
                                         Aggregation method, std::size_t k,
                                         int threads) {
  if (k < 1) fail(Errc::invalid_argument, "k must be >= 1");
  auto ranked = rank_targets(seeds, universe, method, threads);
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

void save_ranked(std::span<const RankedResult> results, const std::string& path) {
  auto out = open_output(path);
  out << "rank\tpatent_id\tscore\n";
  for (const auto& r : results)
    out << r.rank << '\t' << r.patent_id << '\t' << format_real(r.score, 6)
        << '\n';
}

}  // namespace patret
