#include "patret/textembed.hpp"

#include <cctype>
#include <cmath>

#include "patret/error.hpp"
#include "patret/tsv.hpp"

namespace patret {

std::string prepare_sequence(const PatentRecord& record, std::size_t max_tokens) {
  if (max_tokens < 2)
    fail(Errc::invalid_argument, "max_tokens must be at least 2");
  std::string text;
  if (!record.title.empty() && !record.abstract.empty())
    text = record.title + ". " + record.abstract;
  else if (!record.title.empty())
    text = record.title;
  else if (!record.abstract.empty())
    text = record.abstract;
  else
    fail(Errc::empty_text, "patent '" + record.patent_id + "' has no text");

  const auto tokens = split_whitespace(text);
  const std::size_t cap = max_tokens - 1;  // strictly under the cap
  if (tokens.size() <= cap) return text;

  std::string out;
  for (std::size_t i = 0; i < cap; ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

VectorTable load_text_embeddings(const std::string& path) {
  VectorTable table = load_table(path);
  if (!table.vectors.allFinite())
    fail(Errc::io_error, path + ": embedding contains non-finite values");
  return table;
}

namespace {

// Seeded FNV-1a over the token bytes, then a splitmix finalizer so slot
// (low bits) and sign (top bit) decorrelate.
std::uint64_t token_hash(const std::string& token, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ull ^ (seed * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull);
  for (unsigned char c : token) {
    h ^= c;
    h *= 1099511628211ull;
  }
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
  return h ^ (h >> 31);
}

std::string lower_ascii(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::size_t fallback_token_slot(const std::string& token, Index dim, std::uint64_t seed) {
  return static_cast<std::size_t>(token_hash(lower_ascii(token), seed) %
                                  static_cast<std::uint64_t>(dim));
}

int fallback_token_sign(const std::string& token, std::uint64_t seed) {
  return (token_hash(lower_ascii(token), seed) >> 63) ? 1 : -1;
}

Vector fallback_embed(const std::string& text, Index dim, std::uint64_t seed) {
  if (dim < 1) fail(Errc::invalid_argument, "dim must be >= 1");
  const auto tokens = split_whitespace(text);
  if (tokens.empty()) fail(Errc::empty_text, "cannot embed empty text");

  Vector v = Vector::Zero(dim);
  for (const auto& token : tokens) {
    const std::uint64_t h = token_hash(lower_ascii(token), seed);
    const auto slot = static_cast<Index>(h % static_cast<std::uint64_t>(dim));
    v(slot) += (h >> 63) ? Real(1) : Real(-1);
  }
  const Real n = v.norm();
  if (n > 0) v /= n;
  return v;
}

VectorTable fallback_embed_corpus(const CorpusIndex& corpus, Index dim,
                                  std::uint64_t seed, std::size_t max_tokens) {
  VectorTable table;
  table.keys.reserve(corpus.patents.size());
  table.vectors.resize(corpus.size(), dim);
  for (Index i = 0; i < corpus.size(); ++i) {
    const auto& rec = corpus.patents[static_cast<std::size_t>(i)];
    table.vectors.row(i) =
        fallback_embed(prepare_sequence(rec, max_tokens), dim, seed).transpose();
    table.keys.push_back(rec.patent_id);
    table.index.emplace(rec.patent_id, i);
  }
  return table;
}

void emit_sequences(const CorpusIndex& corpus, const std::string& path,
                    std::size_t max_tokens) {
  auto out = open_output(path);
  for (const auto& rec : corpus.patents)
    out << rec.patent_id << '\t' << prepare_sequence(rec, max_tokens) << '\n';
}

}  // namespace patret
