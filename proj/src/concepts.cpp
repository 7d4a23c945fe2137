#include "patret/concepts.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "patret/error.hpp"
#include "patret/tsv.hpp"

namespace patret {

PosTag parse_pos(const std::string& name) {
  if (name == "NOUN") return PosTag::noun;
  if (name == "PROPN") return PosTag::propn;
  if (name == "ADJ") return PosTag::adj;
  if (name == "DET") return PosTag::det;
  if (name == "NUM") return PosTag::num;
  if (name == "OTHER") return PosTag::other;
  fail(Errc::invalid_argument, "unknown POS tag '" + name + "'");
}

const char* pos_name(PosTag tag) {
  switch (tag) {
    case PosTag::noun:  return "NOUN";
    case PosTag::propn: return "PROPN";
    case PosTag::adj:   return "ADJ";
    case PosTag::det:   return "DET";
    case PosTag::num:   return "NUM";
    case PosTag::other: return "OTHER";
  }
  return "?";
}

namespace {

bool is_head(PosTag t) { return t == PosTag::noun || t == PosTag::propn; }

bool is_body(PosTag t) {
  return t == PosTag::adj || t == PosTag::noun || t == PosTag::propn ||
         t == PosTag::num;
}

std::string lower(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::vector<std::string> chunk_noun_phrases(std::span<const TaggedToken> tokens) {
  std::vector<std::string> phrases;
  const std::size_t n = tokens.size();
  std::size_t i = 0;
  while (i < n) {
    const std::size_t start = i;
    std::size_t body = i;
    if (tokens[i].pos == PosTag::det) ++body;
    std::size_t end = body;
    while (end < n && is_body(tokens[end].pos)) ++end;

    // trim the run back to its last NOUN/PROPN head
    std::size_t head = end;
    for (std::size_t m = body; m < end; ++m)
      if (is_head(tokens[m].pos)) head = m;

    if (head < end) {
      std::string phrase;
      for (std::size_t m = start; m <= head; ++m) {
        if (m > start) phrase += ' ';
        phrase += tokens[m].surface;
      }
      phrases.push_back(std::move(phrase));
    }
    i = std::max(end, start + 1);
  }
  return phrases;
}

std::vector<std::string> filter_phrases(std::span<const std::string> phrases,
                                        const PhraseFilterConfig& config) {
  std::vector<std::string> filtered;
  for (const auto& phrase : phrases) {
    const auto words = split_whitespace(lower(phrase));
    std::vector<std::string> kept;
    for (const auto& w : words) {
      if (config.determiners.count(w)) continue;
      if (config.count_terms.count(w)) continue;
      kept.push_back(w);
    }
    if (kept.size() < 2) continue;  // more-than-one-word rule
    std::string joined;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (i > 0) joined += ' ';
      joined += kept[i];
    }
    filtered.push_back(std::move(joined));
  }
  return filtered;
}

std::vector<ConceptCount> count_concepts(std::span<const TaggedDoc> docs,
                                         std::size_t min_freq,
                                         const PhraseFilterConfig& config) {
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : docs)
    for (auto& phrase : filter_phrases(chunk_noun_phrases(doc), config))
      ++counts[phrase];

  std::vector<ConceptCount> out;
  for (auto& [phrase, freq] : counts)
    if (freq >= min_freq) out.push_back({phrase, freq});
  std::sort(out.begin(), out.end(), [](const ConceptCount& x, const ConceptCount& y) {
    if (x.frequency != y.frequency) return x.frequency > y.frequency;
    return x.phrase < y.phrase;
  });
  return out;
}

ConceptDiff compare_sets(std::span<const ConceptCount> initial,
                         std::span<const ConceptCount> retrieved,
                         const std::vector<std::string>& seed_keywords) {
  std::map<std::string, std::size_t> left, right;
  for (const auto& c : initial) left[c.phrase] = c.frequency;
  for (const auto& c : retrieved) right[c.phrase] = c.frequency;

  ConceptDiff diff;
  for (const auto& c : initial) {
    auto it = right.find(c.phrase);
    if (it != right.end())
      diff.shared.push_back({c.phrase, c.frequency, it->second});
    else
      diff.initial_only.push_back({c.phrase, c.frequency, 0});
  }
  for (const auto& c : retrieved)
    if (!left.count(c.phrase))
      diff.retrieved_only.push_back({c.phrase, 0, c.frequency});

  for (const auto& keyword : seed_keywords)
    diff.keyword_presence.emplace_back(keyword, right.count(lower(keyword)) != 0);
  return diff;
}

std::vector<std::pair<std::string, TaggedDoc>> load_tagged_tokens(
    const std::string& path) {
  std::vector<std::pair<std::string, TaggedDoc>> docs;
  std::map<std::string, std::size_t> doc_index;
  for_each_line(path, [&](std::size_t lineno, const std::string& line) {
    if (line.empty()) return;
    const auto fields = split_tabs(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty())
      fail(Errc::malformed_row, path + ":" + std::to_string(lineno) +
                                    ": expected doc_id<TAB>surface<TAB>pos");
    auto [it, inserted] = doc_index.try_emplace(fields[0], docs.size());
    if (inserted) docs.push_back({fields[0], {}});
    docs[it->second].second.push_back({fields[1], parse_pos(fields[2])});
  });
  return docs;
}

namespace {

const std::set<std::string>& stop_words() {
  static const std::set<std::string> words = {
      "is",  "are",  "was",  "were", "be",   "been", "and", "or",  "of",
      "in",  "on",   "at",   "to",   "for",  "with", "by",  "from", "as",
      "it",  "its",  "that", "this", "these", "those", "which", "has",
      "have", "can", "may",  "will", "when", "where", "while", "between"};
  return words;
}

bool looks_numeric(const std::string& w) {
  if (w.empty()) return false;
  for (char c : w)
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.' && c != ',')
      return false;
  return true;
}

bool adjective_suffix(const std::string& w) {
  static const char* suffixes[] = {"ous", "ive", "able", "ible",
                                   "ic",  "al",  "ful",  "less"};
  for (const char* s : suffixes) {
    const std::size_t len = std::char_traits<char>::length(s);
    if (w.size() > len + 2 && w.compare(w.size() - len, len, s) == 0) return true;
  }
  return false;
}

}  // namespace

TaggedDoc fallback_tag(const std::string& text) {
  static const PhraseFilterConfig filter_defaults;
  TaggedDoc doc;
  for (const auto& raw : split_whitespace(text)) {
    // strip surrounding punctuation, keep inner hyphens
    std::size_t b = 0, e = raw.size();
    while (b < e && !std::isalnum(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && !std::isalnum(static_cast<unsigned char>(raw[e - 1]))) --e;
    if (b == e) continue;
    const std::string word = raw.substr(b, e - b);
    const std::string low = lower(word);

    PosTag tag = PosTag::noun;
    if (filter_defaults.determiners.count(low))
      tag = PosTag::det;
    else if (looks_numeric(low) || filter_defaults.count_terms.count(low))
      tag = PosTag::num;
    else if (stop_words().count(low))
      tag = PosTag::other;
    else if (adjective_suffix(low))
      tag = PosTag::adj;
    doc.push_back({word, tag});
  }
  return doc;
}

void save_concepts(std::span<const ConceptCount> initial,
                   std::span<const ConceptCount> retrieved,
                   const std::string& path) {
  auto out = open_output(path);
  out << "set\tphrase\tfrequency\n";
  for (const auto& c : initial)
    out << "initial\t" << c.phrase << '\t' << c.frequency << '\n';
  for (const auto& c : retrieved)
    out << "retrieved\t" << c.phrase << '\t' << c.frequency << '\n';
}

void save_diff(const ConceptDiff& diff, const std::string& path) {
  auto out = open_output(path);
  out << "partition\tphrase\tfreq_initial\tfreq_retrieved\n";
  const auto emit = [&](const char* partition, const ConceptDiff::Row& row) {
    out << partition << '\t' << row.phrase << '\t' << row.freq_initial << '\t'
        << row.freq_retrieved << '\n';
  };
  for (const auto& r : diff.shared) emit("shared", r);
  for (const auto& r : diff.initial_only) emit("initial_only", r);
  for (const auto& r : diff.retrieved_only) emit("retrieved_only", r);
  for (const auto& [keyword, present] : diff.keyword_presence)
    out << (present ? "keyword_present" : "keyword_absent") << '\t' << keyword
        << "\t0\t0\n";
}

}  // namespace patret
