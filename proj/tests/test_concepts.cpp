#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "patret/concepts.hpp"
#include "patret/error.hpp"
#include "support.hpp"

using namespace patret;

namespace {

TaggedDoc doc(std::initializer_list<std::pair<const char*, const char*>> tokens) {
  TaggedDoc d;
  for (const auto& [surface, pos] : tokens) d.push_back({surface, parse_pos(pos)});
  return d;
}

}  // namespace

TEST_CASE("chunking follows DET? (ADJ|NOUN|PROPN|NUM)* (NOUN|PROPN)") {
  SUBCASE("determiner + adjective + noun") {
    const auto phrases = chunk_noun_phrases(
        doc({{"the", "DET"}, {"outer", "ADJ"}, {"casing", "NOUN"}}));
    CHECK(phrases == std::vector<std::string>{"the outer casing"});
  }
  SUBCASE("no head noun, no phrase") {
    CHECK(chunk_noun_phrases(doc({{"rolls", "OTHER"}, {"quickly", "OTHER"}})).empty());
  }
  SUBCASE("trailing number is not a head") {
    const auto phrases = chunk_noun_phrases(doc({{"a", "DET"},
                                                 {"sliding", "ADJ"},
                                                 {"switch", "NOUN"},
                                                 {"106", "NUM"},
                                                 {"is", "OTHER"}}));
    CHECK(phrases == std::vector<std::string>{"a sliding switch"});
  }
  SUBCASE("number inside a phrase is kept") {
    const auto phrases = chunk_noun_phrases(
        doc({{"type", "NOUN"}, {"2", "NUM"}, {"polymer", "NOUN"}}));
    CHECK(phrases == std::vector<std::string>{"type 2 polymer"});
  }
  SUBCASE("runs split on OTHER") {
    const auto phrases = chunk_noun_phrases(doc({{"spool", "NOUN"},
                                                 {"of", "OTHER"},
                                                 {"the", "DET"},
                                                 {"drive", "NOUN"},
                                                 {"unit", "NOUN"}}));
    CHECK(phrases == std::vector<std::string>{"spool", "the drive unit"});
  }
  SUBCASE("proper nouns can head a phrase") {
    const auto phrases =
        chunk_noun_phrases(doc({{"Valspar", "PROPN"}, {"Sourcing", "PROPN"}}));
    CHECK(phrases == std::vector<std::string>{"Valspar Sourcing"});
  }
  SUBCASE("empty input gives empty output") {
    CHECK(chunk_noun_phrases(TaggedDoc{}).empty());
  }
}

TEST_CASE("filter_phrases applies the four rules") {
  const std::vector<std::string> raw = {"The Outer Casing", "first wheel",
                                        "a sphere", "Coupling Rod",
                                        "the first drive unit"};
  const auto filtered = filter_phrases(raw);
  CHECK(filtered == std::vector<std::string>{"outer casing", "coupling rod",
                                             "drive unit"});
}

TEST_CASE("filter_phrases is idempotent") {
  const std::vector<std::string> raw = {
      "The Outer Casing", "second gear assembly", "ten rolling toys",
      "an inner toy body", "magnetic switch"};
  const auto once = filter_phrases(raw);
  const auto twice = filter_phrases(once);
  CHECK(once == twice);
}

TEST_CASE("count_concepts sums over documents with the min_freq cut") {
  std::vector<TaggedDoc> docs;
  for (int i = 0; i < 19; ++i)
    docs.push_back(doc({{"outer", "ADJ"}, {"casing", "NOUN"}}));
  docs.push_back(doc({{"pivot", "NOUN"}, {"axis", "NOUN"}}));
  docs.push_back(doc({{"pivot", "NOUN"}, {"axis", "NOUN"}}));
  docs.push_back(doc({{"lonely", "ADJ"}, {"phrase", "NOUN"}}));  // singleton

  const auto counts = count_concepts(docs);
  REQUIRE(counts.size() == 2);
  CHECK(counts[0].phrase == "outer casing");
  CHECK(counts[0].frequency == 19);
  CHECK(counts[1].phrase == "pivot axis");
  CHECK(counts[1].frequency == 2);

  // min_freq 1 keeps the singleton
  CHECK(count_concepts(docs, 1).size() == 3);
}

TEST_CASE("count_concepts ties sort alphabetically") {
  std::vector<TaggedDoc> docs;
  for (int i = 0; i < 4; ++i) {
    docs.push_back(doc({{"zeta", "ADJ"}, {"unit", "NOUN"}}));
    docs.push_back(doc({{"alpha", "ADJ"}, {"unit", "NOUN"}}));
  }
  const auto counts = count_concepts(docs);
  REQUIRE(counts.size() == 2);
  CHECK(counts[0].phrase == "alpha unit");
  CHECK(counts[1].phrase == "zeta unit");
  CHECK(counts[0].frequency == counts[1].frequency);
}

TEST_CASE("count matches a brute-force recount") {
  std::vector<TaggedDoc> docs;
  for (int i = 0; i < 7; ++i) {
    TaggedDoc d;
    for (int k = 0; k <= i % 3; ++k) {
      d.push_back({"drive", PosTag::noun});
      d.push_back({"unit", PosTag::noun});
      d.push_back({"of", PosTag::other});
    }
    docs.push_back(d);
  }
  const auto counts = count_concepts(docs, 1);

  std::map<std::string, std::size_t> recount;
  for (const auto& d : docs)
    for (const auto& p : filter_phrases(chunk_noun_phrases(d)))
      ++recount[p];
  REQUIRE(counts.size() == recount.size());
  for (const auto& c : counts) CHECK(recount.at(c.phrase) == c.frequency);
}

TEST_CASE("compare_sets partitions and keyword flags") {
  const std::vector<ConceptCount> initial = {{"pivot axis", 3},
                                             {"rolling toy", 4},
                                             {"gear assembly", 3}};
  const std::vector<ConceptCount> retrieved = {{"pivot axis", 3},
                                               {"spheroid shell", 5},
                                               {"toy vehicle", 14}};

  const auto diff =
      compare_sets(initial, retrieved, {"rolling toy", "spheroid shell"});
  REQUIRE(diff.shared.size() == 1);
  CHECK(diff.shared[0].phrase == "pivot axis");
  CHECK(diff.shared[0].freq_initial == 3);
  CHECK(diff.shared[0].freq_retrieved == 3);
  CHECK(diff.initial_only.size() == 2);
  CHECK(diff.retrieved_only.size() == 2);

  // seed keyword "rolling toy" is absent from the retrieved column
  REQUIRE(diff.keyword_presence.size() == 2);
  CHECK(diff.keyword_presence[0].first == "rolling toy");
  CHECK(diff.keyword_presence[0].second == false);
  CHECK(diff.keyword_presence[1].second == true);

  // partitions are disjoint and cover both vocabularies
  std::set<std::string> seen;
  for (const auto& r : diff.shared) CHECK(seen.insert(r.phrase).second);
  for (const auto& r : diff.initial_only) CHECK(seen.insert(r.phrase).second);
  for (const auto& r : diff.retrieved_only) CHECK(seen.insert(r.phrase).second);
  CHECK(seen.size() == 5);
  for (const auto& c : initial) CHECK(seen.count(c.phrase));
  for (const auto& c : retrieved) CHECK(seen.count(c.phrase));
}

TEST_CASE("disjoint inputs share nothing") {
  const std::vector<ConceptCount> a = {{"left part", 2}};
  const std::vector<ConceptCount> b = {{"right part", 2}};
  const auto diff = compare_sets(a, b);
  CHECK(diff.shared.empty());
  CHECK(diff.initial_only.size() == 1);
  CHECK(diff.retrieved_only.size() == 1);
}

TEST_CASE("tokens.tsv loads grouped by document") {
  write_file("tokens_in.tsv",
             "D1\tthe\tDET\nD1\touter\tADJ\nD1\tcasing\tNOUN\n"
             "D2\tpivot\tNOUN\nD2\taxis\tNOUN\nD1\textra\tNOUN\n");
  const auto docs = load_tagged_tokens("tokens_in.tsv");
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].first == "D1");
  CHECK(docs[0].second.size() == 4);  // later D1 rows append to the same doc
  CHECK(docs[1].second[0].surface == "pivot");

  write_file("tokens_bad.tsv", "D1\tword\tVERB\n");
  CHECK_THROWS_AS(load_tagged_tokens("tokens_bad.tsv"), Error);
}

TEST_CASE("fallback tagger is crude but usable for chunking") {
  const auto tagged = fallback_tag("The outer casing, of a sliding switch 106.");
  REQUIRE(tagged.size() == 8);
  CHECK(tagged[0].pos == PosTag::det);     // The
  CHECK(tagged[2].surface == "casing");    // punctuation stripped
  CHECK(tagged[3].pos == PosTag::other);   // of
  CHECK(tagged[6].pos == PosTag::noun);    // switch
  CHECK(tagged[7].pos == PosTag::num);     // 106

  const auto phrases = filter_phrases(chunk_noun_phrases(tagged));
  CHECK(std::find(phrases.begin(), phrases.end(), "outer casing") != phrases.end());
  CHECK(std::find(phrases.begin(), phrases.end(), "sliding switch") != phrases.end());
}
