#include "patret/evalrecall.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "patret/error.hpp"
#include "patret/tsv.hpp"

namespace patret {

RankCurve make_curve(std::string method, std::vector<std::size_t> ranks) {
  for (std::size_t r : ranks)
    if (r < 1) fail(Errc::invalid_argument, "ranks must be positive");
  std::sort(ranks.begin(), ranks.end());
  RankCurve curve;
  curve.method = std::move(method);
  curve.log_ranks.reserve(ranks.size());
  for (std::size_t r : ranks)
    curve.log_ranks.push_back(std::log10(static_cast<Real>(r)));
  curve.ranks = std::move(ranks);
  return curve;
}

RankCurve baseline_curve(std::size_t n) {
  if (n < 1) fail(Errc::invalid_argument, "baseline needs n >= 1");
  std::vector<std::size_t> ranks(n);
  for (std::size_t i = 0; i < n; ++i) ranks[i] = i + 1;
  return make_curve("baseline", std::move(ranks));
}

std::vector<RankCurve> recall_experiment(const SeedSet& seeds,
                                         const std::vector<std::string>& holdout,
                                         const VectorTable& universe,
                                         std::span<const Aggregation> methods,
                                         int threads) {
  if (holdout.empty()) fail(Errc::invalid_argument, "holdout is empty");
  std::set<std::string> holdout_set(holdout.begin(), holdout.end());
  for (const auto& id : holdout_set)
    if (seeds.contains(id))
      fail(Errc::invalid_argument, "holdout id '" + id + "' is also a seed");

  std::string missing;
  for (const auto& id : holdout_set)
    if (!universe.contains(id)) missing += (missing.empty() ? "" : ", ") + id;
  if (!missing.empty())
    fail(Errc::holdout_not_in_universe, "holdout ids not in universe: " + missing);

  std::vector<RankCurve> curves;
  curves.reserve(methods.size());
  for (Aggregation method : methods) {
    const auto ranked = rank_targets(seeds, universe, method, threads);
    std::unordered_map<std::string, std::size_t> rank_of;
    for (const auto& r : ranked) rank_of.emplace(r.patent_id, r.rank);

    std::vector<std::size_t> ranks;
    ranks.reserve(holdout_set.size());
    for (const auto& id : holdout_set) ranks.push_back(rank_of.at(id));
    curves.push_back(make_curve(aggregation_name(method), std::move(ranks)));
  }
  return curves;
}

Real auc(const RankCurve& curve) {
  const std::size_t n = curve.log_ranks.size();
  if (n == 0) fail(Errc::invalid_argument, "auc of an empty curve");
  if (n == 1) return curve.log_ranks[0];  // width-0 convention
  Real area = 0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    area += (curve.log_ranks[i] + curve.log_ranks[i + 1]) / 2;
  return area;
}

std::vector<ComparedCurve> compare_methods(std::span<const RankCurve> curves) {
  if (curves.size() < 2)
    fail(Errc::invalid_argument, "compare_methods needs at least 2 curves");
  const std::size_t len = curves.front().ranks.size();
  for (const auto& c : curves)
    if (c.ranks.size() != len)
      fail(Errc::length_mismatch,
           "curve '" + c.method + "' has " + std::to_string(c.ranks.size()) +
               " points, expected " + std::to_string(len));

  std::vector<ComparedCurve> compared;
  compared.reserve(curves.size());
  for (const auto& c : curves) compared.push_back({c, auc(c)});
  std::stable_sort(compared.begin(), compared.end(),
                   [](const ComparedCurve& x, const ComparedCurve& y) {
                     return x.auc < y.auc;
                   });
  return compared;
}

void save_curves(std::span<const RankCurve> curves, const std::string& path) {
  auto out = open_output(path);
  out << "method\tindex\trank\tlog10_rank\n";
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.ranks.size(); ++i)
      out << c.method << '\t' << (i + 1) << '\t' << c.ranks[i] << '\t'
          << format_real(c.log_ranks[i], 6) << '\n';
}

void save_aucs(std::span<const ComparedCurve> compared, const std::string& path) {
  auto out = open_output(path);
  out << "method\tauc\n";
  for (const auto& c : compared)
    out << c.curve.method << '\t' << format_real(c.auc, 6) << '\n';
}

}  // namespace patret
