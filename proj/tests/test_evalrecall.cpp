#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "patret/error.hpp"
#include "patret/evalrecall.hpp"
#include "patret/rng.hpp"
#include "patret/synthetic.hpp"
#include "support.hpp"

using namespace patret;

TEST_CASE("make_curve sorts ranks ascending and takes log10") {
  const auto curve = make_curve("mean", {3, 1, 7});
  CHECK(curve.ranks == std::vector<std::size_t>{1, 3, 7});
  CHECK(curve.log_ranks[0] == doctest::Approx(0.0));
  CHECK(curve.log_ranks[1] == doctest::Approx(std::log10(3.0)));
  CHECK(curve.log_ranks[2] == doctest::Approx(std::log10(7.0)));
  CHECK_THROWS_AS(make_curve("mean", {0, 1}), Error);
}

TEST_CASE("baseline curve is 1..n") {
  const auto b3 = baseline_curve(3);
  CHECK(b3.ranks == std::vector<std::size_t>{1, 2, 3});
  CHECK(b3.log_ranks[0] == doctest::Approx(0.0));
  CHECK(b3.log_ranks[1] == doctest::Approx(std::log10(2.0)));
  CHECK(b3.log_ranks[2] == doctest::Approx(std::log10(3.0)));

  CHECK(baseline_curve(1).ranks == std::vector<std::size_t>{1});
  const auto b99 = baseline_curve(99);
  CHECK(b99.ranks.size() == 99);
  CHECK(b99.log_ranks.front() == doctest::Approx(0.0));
  CHECK_THROWS_AS(baseline_curve(0), Error);
}

TEST_CASE("auc trapezoids") {
  // single point: width-0 convention returns the value
  CHECK(auc(baseline_curve(1)) == doctest::Approx(0.0));
  // all ranks 10 over 3 points: height 1, width 2 -> area 2
  CHECK(auc(make_curve("x", {10, 10, 10})) == doctest::Approx(2.0).epsilon(1e-12));
  // matches the oracle on random curves
  Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> ranks(2 + uniform_index(rng, 30));
    for (auto& r : ranks) r = 1 + uniform_index(rng, 5000);
    CHECK(auc(make_curve("x", ranks)) ==
          doctest::Approx(oracle::curve_auc(ranks)).epsilon(1e-12));
  }
}

TEST_CASE("auc monotonicity: raising any rank never lowers the area") {
  Rng rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> ranks(3 + uniform_index(rng, 20));
    for (auto& r : ranks) r = 1 + uniform_index(rng, 500);
    const Real before = auc(make_curve("x", ranks));
    auto bumped = ranks;
    bumped[uniform_index(rng, bumped.size())] += 1 + uniform_index(rng, 100);
    CHECK(auc(make_curve("x", bumped)) >= before - 1e-12);
  }
}

TEST_CASE("baseline has the minimum AUC among equal-length curves") {
  const Real base = auc(baseline_curve(30));
  Rng rng(46);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> ranks;
    std::set<std::size_t> used;
    while (ranks.size() < 30) {
      const std::size_t r = 1 + uniform_index(rng, 4000);
      if (used.insert(r).second) ranks.push_back(r);
    }
    CHECK(auc(make_curve("x", ranks)) >= base);
  }
}

TEST_CASE("compare_methods orders by ascending AUC with stable ties") {
  const auto a = make_curve("mean", {1, 2, 3});
  const auto b = make_curve("max", {10, 20, 30});
  const auto c = make_curve("median", {1, 2, 3});  // ties with "mean"

  const std::vector<RankCurve> curves = {b, a, c};
  const auto compared = compare_methods(curves);
  REQUIRE(compared.size() == 3);
  CHECK(compared[0].curve.method == "mean");  // input order preserved on tie
  CHECK(compared[1].curve.method == "median");
  CHECK(compared[2].curve.method == "max");
  CHECK(compared[0].auc < compared[2].auc);

  const std::vector<RankCurve> bad = {a, make_curve("short", {1, 2})};
  try {
    compare_methods(bad);
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::length_mismatch);
  }
  const std::vector<RankCurve> lone = {a};
  CHECK_THROWS_AS(compare_methods(lone), Error);
}

TEST_CASE("recall_experiment extracts holdout ranks") {
  // hand-built universe: seed plus three targets at known cosines
  VectorTable t;
  t.vectors.resize(4, 2);
  t.vectors << 1, 0,
               0.9, 0.1,   // H1: rank 1
               0.5, 0.5,   // H2: rank 2
               -0.2, 0.9;  // D:  rank 3
  t.keys = {"S", "H1", "H2", "D"};
  t.rebuild_index();

  const auto seeds = SeedSet::create({"S"}, t);
  const std::vector<Aggregation> methods = {Aggregation::mean};
  const auto curves = recall_experiment(seeds, {"H2", "H1"}, t, methods);
  REQUIRE(curves.size() == 1);
  CHECK(curves[0].ranks == std::vector<std::size_t>{1, 2});

  // order invariance of the holdout list
  const auto swapped = recall_experiment(seeds, {"H1", "H2"}, t, methods);
  CHECK(swapped[0].ranks == curves[0].ranks);

  // perfect retrieval of n holdouts gives ranks 1..n
  const auto both = recall_experiment(seeds, {"H1", "H2"}, t, methods);
  CHECK(both[0].ranks == baseline_curve(2).ranks);
}

TEST_CASE("recall_experiment validates holdout membership and disjointness") {
  VectorTable t;
  t.vectors = Matrix::Random(3, 4);
  t.keys = {"A", "B", "C"};
  t.rebuild_index();
  const auto seeds = SeedSet::create({"A"}, t);
  const std::vector<Aggregation> methods = {Aggregation::mean};

  try {
    recall_experiment(seeds, {"B", "MISSING"}, t, methods);
    FAIL("expected HoldoutNotInUniverse");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::holdout_not_in_universe);
    CHECK(std::string(e.what()).find("MISSING") != std::string::npos);
  }
  CHECK_THROWS_AS(recall_experiment(seeds, {"A"}, t, methods), Error);
}

TEST_CASE("cluster fixture: mean curve dominates max curve pointwise") {
  const RecallFixture fix = make_recall_fixture({});
  const auto seeds = SeedSet::create(fix.seed_ids, fix.universe);
  const std::vector<Aggregation> methods = {Aggregation::mean, Aggregation::max};
  const auto curves =
      recall_experiment(seeds, fix.holdout_ids, fix.universe, methods);
  REQUIRE(curves.size() == 2);

  // verify both rank curves against the brute-force oracle
  for (const auto& curve : curves) {
    const auto ranked = oracle::rank(fix.seed_ids, fix.universe, curve.method);
    std::vector<std::size_t> want;
    for (std::size_t pos = 0; pos < ranked.size(); ++pos)
      for (const auto& h : fix.holdout_ids)
        if (ranked[pos].id == h) want.push_back(pos + 1);
    std::sort(want.begin(), want.end());
    CHECK(curve.ranks == want);
  }

  for (std::size_t i = 0; i < curves[0].ranks.size(); ++i)
    CHECK(curves[0].ranks[i] <= curves[1].ranks[i]);
  CHECK(auc(curves[0]) < auc(curves[1]));
}

TEST_CASE("curve and auc files") {
  const std::vector<RankCurve> curves = {make_curve("mean", {1, 5}),
                                         make_curve("max", {2, 9})};
  save_curves(curves, "curves_out.tsv");
  const std::string text = read_file("curves_out.tsv");
  CHECK(text.rfind("method\tindex\trank\tlog10_rank\n", 0) == 0);
  CHECK(text.find("mean\t2\t5\t") != std::string::npos);

  const auto compared = compare_methods(curves);
  save_aucs(compared, "auc_out.tsv");
  const std::string aucs = read_file("auc_out.tsv");
  CHECK(aucs.rfind("method\tauc\n", 0) == 0);
  CHECK(aucs.find("mean\t") != std::string::npos);
}
