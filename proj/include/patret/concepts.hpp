#pragma once

#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace patret {

// Coarse POS tags as produced by an external tagger.
enum class PosTag { noun, propn, adj, det, num, other };

PosTag parse_pos(const std::string& name);
const char* pos_name(PosTag tag);

struct TaggedToken {
  std::string surface;
  PosTag pos;
};

using TaggedDoc = std::vector<TaggedToken>;

// Maximal contiguous runs matching DET? (ADJ|NOUN|PROPN|NUM)* (NOUN|PROPN),
// emitted as surface strings joined by single spaces.
std::vector<std::string> chunk_noun_phrases(std::span<const TaggedToken> tokens);

struct PhraseFilterConfig {
  std::set<std::string> determiners = {"the", "a", "an"};
  // Closed count-term list: ordinals first..tenth plus cardinals one..ten.
  std::set<std::string> count_terms = {
      "first", "second", "third",  "fourth", "fifth",  "sixth", "seventh",
      "eighth", "ninth", "tenth",  "one",    "two",    "three", "four",
      "five",   "six",   "seven",  "eight",  "nine",   "ten"};
};

// Lowercases each phrase, strips determiner and count tokens wherever they
// appear, and discards anything reduced to fewer than two words. Idempotent.
std::vector<std::string> filter_phrases(std::span<const std::string> phrases,
                                        const PhraseFilterConfig& config = {});

struct ConceptCount {
  std::string phrase;
  std::size_t frequency;
};

// Chunks + filters every document, sums phrase frequencies over all
// documents, drops entries under min_freq, and sorts by frequency
// descending then phrase ascending.
std::vector<ConceptCount> count_concepts(std::span<const TaggedDoc> docs,
                                         std::size_t min_freq = 2,
                                         const PhraseFilterConfig& config = {});

struct ConceptDiff {
  struct Row {
    std::string phrase;
    std::size_t freq_initial = 0;
    std::size_t freq_retrieved = 0;
  };
  std::vector<Row> shared;
  std::vector<Row> initial_only;
  std::vector<Row> retrieved_only;
  // seed keyword -> present anywhere in the retrieved column?
  std::vector<std::pair<std::string, bool>> keyword_presence;
};

ConceptDiff compare_sets(std::span<const ConceptCount> initial,
                         std::span<const ConceptCount> retrieved,
                         const std::vector<std::string>& seed_keywords = {});

// tokens.tsv: doc_id \t surface \t pos. Documents keep file order; tokens
// keep in-document order.
std::vector<std::pair<std::string, TaggedDoc>> load_tagged_tokens(
    const std::string& path);

// Crude built-in tagger for hermetic runs: closed determiner and number
// word lists, a short adjective suffix list, everything else NOUN except
// a small function-word list tagged OTHER.
TaggedDoc fallback_tag(const std::string& text);

// concepts.tsv: set \t phrase \t frequency
void save_concepts(std::span<const ConceptCount> initial,
                   std::span<const ConceptCount> retrieved,
                   const std::string& path);

// diff.tsv: partition \t phrase \t freq_initial \t freq_retrieved
// (keyword flags appear as partitions keyword_present / keyword_absent)
void save_diff(const ConceptDiff& diff, const std::string& path);

}  // namespace patret
