#pragma once

#include <span>
#include <string>
#include <vector>

#include "patret/retrieval.hpp"
#include "patret/types.hpp"

namespace patret {

// Sorted holdout ranks for one aggregation method, on a log10 scale.
struct RankCurve {
  std::string method;
  std::vector<std::size_t> ranks;  // ascending
  std::vector<Real> log_ranks;     // log10(ranks[i])
};

// Builds a curve from raw ranks (>= 1), sorting them ascending and filling
// in the logs.
RankCurve make_curve(std::string method, std::vector<std::size_t> ranks);

// Ideal curve: the n relevant patents ranked exactly 1..n.
RankCurve baseline_curve(std::size_t n);

// Ranks the held-out relevant set against the seed set under each method
// and returns one curve per method, in the given order. The holdout must
// be inside the universe and disjoint from the seeds.
std::vector<RankCurve> recall_experiment(const SeedSet& seeds,
                                         const std::vector<std::string>& holdout,
                                         const VectorTable& universe,
                                         std::span<const Aggregation> methods,
                                         int threads = 1);

// Trapezoidal area under log_ranks over unit-spaced positions 1..n. A
// single-point curve has no width; by convention its AUC is the point's
// log value itself.
Real auc(const RankCurve& curve);

struct ComparedCurve {
  RankCurve curve;
  Real auc = 0;
};

// Sorts curves by ascending AUC (ties keep input order); front() wins.
// All curves must have equal length.
std::vector<ComparedCurve> compare_methods(std::span<const RankCurve> curves);

// curves.tsv: method \t index \t rank \t log10_rank   (index is 1-based)
void save_curves(std::span<const RankCurve> curves, const std::string& path);

// auc.tsv: method \t auc
void save_aucs(std::span<const ComparedCurve> compared, const std::string& path);

}  // namespace patret
