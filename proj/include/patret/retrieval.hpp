#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "patret/error.hpp"
#include "patret/types.hpp"
#include "patret/vector_table.hpp"

namespace patret {

// cos(u, v) = dot(u, v) / (||u|| ||v||) for any two Eigen vector
// expressions of equal length. Throws Errc::zero_vector on a zero input.
// The denominator is sqrt(dot(u,u) * dot(v,v)), so bitwise-identical
// inputs give exactly 1.
template <typename DU, typename DV>
Real cosine(const Eigen::MatrixBase<DU>& u, const Eigen::MatrixBase<DV>& v) {
  if (u.size() != v.size())
    fail(Errc::dim_mismatch, "cosine: dims " + std::to_string(u.size()) +
                                 " vs " + std::to_string(v.size()));
  const auto uc = u.reshaped();
  const auto vc = v.reshaped();
  const Real uu = uc.dot(uc);
  const Real vv = vc.dot(vc);
  if (uu == 0 || vv == 0) fail(Errc::zero_vector, "cosine of a zero vector");
  return uc.dot(vc) / std::sqrt(uu * vv);
}

enum class Aggregation { mean, median, min, max };

const char* aggregation_name(Aggregation a);
Aggregation parse_aggregation(const std::string& name);

// The named statistic of a non-empty score list; the median of an
// even-length list is the midpoint average.
Real aggregate(std::span<const Real> scores, Aggregation method);

// The initial patents retrieval starts from. Construction validates that
// every id is present in the given table and that there are no duplicates.
struct SeedSet {
  std::vector<std::string> patent_ids;

  static SeedSet create(const std::vector<std::string>& ids,
                        const VectorTable& universe);
  bool contains(const std::string& id) const;
};

// seeds.txt: one patent id per line.
std::vector<std::string> load_id_file(const std::string& path);

struct RankedResult {
  std::string patent_id;
  Real score;        // aggregated cosine; -inf for zero-vector targets
  std::size_t rank;  // 1-based, unique
};

// Scores every universe patent outside the seed set by the aggregated
// cosine against all seeds, sorted by descending score with ties broken by
// ascending patent_id. Zero-vector targets sink to the bottom with score
// -inf and are counted in zero_vector_targets. Thread-partitioned scoring
// yields results identical to sequential.
std::vector<RankedResult> rank_targets(const SeedSet& seeds,
                                       const VectorTable& universe,
                                       Aggregation method, int threads = 1,
                                       std::size_t* zero_vector_targets = nullptr);

// First min(k, M) entries of rank_targets.
std::vector<RankedResult> retrieve_top_k(const SeedSet& seeds,
                                         const VectorTable& universe,
                                         Aggregation method, std::size_t k,
                                         int threads = 1);

// ranked.tsv: rank \t patent_id \t score (6 decimals).
void save_ranked(std::span<const RankedResult> results, const std::string& path);

}  // namespace patret
