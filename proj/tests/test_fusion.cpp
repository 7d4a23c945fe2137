#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "patret/error.hpp"
#include "patret/fusion.hpp"
#include "patret/retrieval.hpp"
#include "patret/rng.hpp"
#include "support.hpp"

using namespace patret;

namespace {

VectorTable table_of(std::vector<std::pair<std::string, Vector>> rows) {
  VectorTable t;
  t.vectors.resize(static_cast<Index>(rows.size()), rows[0].second.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t.vectors.row(static_cast<Index>(i)) = rows[i].second.transpose();
    t.keys.push_back(rows[i].first);
    t.index.emplace(rows[i].first, static_cast<Index>(i));
  }
  return t;
}

Vector vec2(Real a, Real b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("spec parsing covers the eleven schemes") {
  const auto specs = all_fusion_specs();
  REQUIRE(specs.size() == 11);
  CHECK(specs[0].to_string() == "A");
  CHECK(specs[3].to_string() == "A+B");
  CHECK(specs[6].to_string() == "A+B+C");
  CHECK(specs[7].to_string() == "[A,B]");
  CHECK(specs[10].to_string() == "[A,B,C]");

  CHECK(FusionSpec::parse("[A, B, C]").to_string() == "[A,B,C]");
  CHECK(FusionSpec::parse("a + c").to_string() == "A+C");
  CHECK_THROWS_AS(FusionSpec::parse("[B,A]"), Error);   // order rule
  CHECK_THROWS_AS(FusionSpec::parse("A+A"), Error);     // repeats
  CHECK_THROWS_AS(FusionSpec::parse("[A,"), Error);
  CHECK_THROWS_AS(FusionSpec::parse("D"), Error);
}

TEST_CASE("concat appends blocks in A,B,C order; add sums them") {
  const auto a = table_of({{"P", vec2(1, 0)}});
  const auto b = table_of({{"P", vec2(0, 1)}});
  BlockTables tables{&a, &b, nullptr};

  const FusedVector cat = fuse(FusionSpec::parse("[A,B]"), "P", tables,
                               MissingPolicy::error);
  REQUIRE(cat.vector.size() == 4);
  CHECK(cat.vector(0) == 1);
  CHECK(cat.vector(1) == 0);
  CHECK(cat.vector(2) == 0);
  CHECK(cat.vector(3) == 1);

  const FusedVector sum = fuse(FusionSpec::parse("A+B"), "P", tables,
                               MissingPolicy::error);
  REQUIRE(sum.vector.size() == 2);
  CHECK(sum.vector(0) == 1);
  CHECK(sum.vector(1) == 1);
}

TEST_CASE("[A,B,C] over 384-dim blocks is 1152-dim") {
  VectorTable a, b, c;
  a.vectors = Matrix::Random(1, 384);
  b.vectors = Matrix::Random(1, 384);
  c.vectors = Matrix::Random(1, 384);
  for (VectorTable* t : {&a, &b, &c}) {
    t->keys = {"P"};
    t->rebuild_index();
  }
  BlockTables tables{&a, &b, &c};
  const FusedVector v =
      fuse(FusionSpec::parse("[A,B,C]"), "P", tables, MissingPolicy::error);
  CHECK(v.vector.size() == 1152);
}

TEST_CASE("add with unequal dims is a DimMismatch") {
  const auto a = table_of({{"P", vec2(1, 0)}});
  VectorTable b;
  b.vectors = Matrix::Ones(1, 3);
  b.keys = {"P"};
  b.rebuild_index();
  BlockTables tables{&a, &b, nullptr};
  try {
    fuse(FusionSpec::parse("A+B"), "P", tables, MissingPolicy::error);
    FAIL("expected DimMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dim_mismatch);
  }
}

TEST_CASE("missing blocks follow the policy") {
  const auto a = table_of({{"P1", vec2(1, 0)}, {"P2", vec2(2, 2)}});
  const auto b = table_of({{"P1", vec2(0, 1)}});  // P2 has no B block
  BlockTables tables{&a, &b, nullptr};
  const auto spec = FusionSpec::parse("[A,B]");

  SUBCASE("error policy aborts") {
    try {
      fuse(spec, "P2", tables, MissingPolicy::error);
      FAIL("expected MissingEmbedding");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::missing_embedding);
    }
  }
  SUBCASE("zero policy substitutes a zero block and flags the result") {
    const FusedVector v = fuse(spec, "P2", tables, MissingPolicy::zero);
    CHECK_FALSE(v.complete());
    CHECK(v.vector(0) == 2);
    CHECK(v.vector(1) == 2);
    CHECK(v.vector(2) == 0);
    CHECK(v.vector(3) == 0);
  }
  SUBCASE("fuse_all coverage report") {
    CorpusIndex corpus;
    for (const char* id : {"P1", "P2"}) {
      PatentRecord rec;
      rec.patent_id = id;
      rec.title = "t";
      corpus.patent_order.emplace(id, corpus.size());
      corpus.patents.push_back(rec);
    }
    const FusedTable fused = fuse_all(spec, corpus, tables, MissingPolicy::zero);
    CHECK(fused.table.size() == 2);
    CHECK(fused.coverage.flagged == 1);
    CHECK(fused.coverage.missing_by_block[static_cast<int>(Block::citation)] == 1);
    CHECK(fused.coverage.missing_by_block[static_cast<int>(Block::text)] == 0);

    save_fusion_manifest(fused, "fused_manifest.json");
    const std::string manifest = read_file("fused_manifest.json");
    CHECK(manifest.find("\"[A,B]\"") != std::string::npos);
    CHECK(manifest.find("\"concat\"") != std::string::npos);
  }
}

TEST_CASE("concat cosine decomposition on unit-norm blocks") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    Vector a1(8), a2(8), b1(8), b2(8);
    for (Index j = 0; j < 8; ++j) {
      a1(j) = normal(rng);
      a2(j) = normal(rng);
      b1(j) = normal(rng);
      b2(j) = normal(rng);
    }
    a1 /= a1.norm();
    a2 /= a2.norm();
    b1 /= b1.norm();
    b2 /= b2.norm();

    Vector u(16), v(16);
    u << a1, b1;
    v << a2, b2;
    const Real direct = cosine(u, v);
    const Real decomposed = (cosine(a1, a2) + cosine(b1, b2)) / 2;
    CHECK(std::abs(direct - decomposed) <= 1e-12);
  }
}

TEST_CASE("identical blocks give fused cosine 1 for every spec") {
  const auto a = table_of({{"P1", vec2(0.3, 0.7)}, {"P2", vec2(0.3, 0.7)}});
  const auto b = table_of({{"P1", vec2(-1, 2)}, {"P2", vec2(-1, 2)}});
  const auto c = table_of({{"P1", vec2(5, 0.1)}, {"P2", vec2(5, 0.1)}});
  BlockTables tables{&a, &b, &c};

  for (const auto& spec : all_fusion_specs()) {
    const FusedVector u = fuse(spec, "P1", tables, MissingPolicy::error);
    const FusedVector v = fuse(spec, "P2", tables, MissingPolicy::error);
    CHECK(cosine(u.vector, v.vector) == 1.0);
  }
}

TEST_CASE("fuse is deterministic across runs and block-normalization works") {
  const auto a = table_of({{"P", vec2(3, 4)}});
  const auto b = table_of({{"P", vec2(0, 2)}});
  BlockTables tables{&a, &b, nullptr};
  const auto spec = FusionSpec::parse("[A,B]");

  const FusedVector u = fuse(spec, "P", tables, MissingPolicy::error);
  const FusedVector v = fuse(spec, "P", tables, MissingPolicy::error);
  CHECK(u.vector == v.vector);

  const FusedVector n =
      fuse(spec, "P", tables, MissingPolicy::error, /*normalize_blocks=*/true);
  CHECK(n.vector(0) == doctest::Approx(0.6));
  CHECK(n.vector(1) == doctest::Approx(0.8));
  CHECK(n.vector(2) == doctest::Approx(0.0));
  CHECK(n.vector(3) == doctest::Approx(1.0));
}
