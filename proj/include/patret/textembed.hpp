#pragma once

#include <cstdint>
#include <string>

#include "patret/corpus.hpp"
#include "patret/types.hpp"
#include "patret/vector_table.hpp"

namespace patret {

// "title. abstract", whitespace-tokenized and truncated to at most
// max_tokens - 1 tokens (strictly under the cap). Truncation never splits a
// token; inputs already under the cap pass through unchanged. Throws
// Errc::empty_text when both fields are empty.
std::string prepare_sequence(const PatentRecord& record, std::size_t max_tokens = 256);

// Ingests externally produced sequence embeddings (shared binary format).
// Rejects duplicate keys, dimension disagreements, and non-finite entries.
VectorTable load_text_embeddings(const std::string& path);

// Deterministic stand-in encoder: hashed bag-of-words. Each lowercased
// token hashes (seeded) to a slot in [0, dim) and a sign, counts
// accumulate, and the result is L2-normalized. Identical texts give
// identical vectors; token order never matters.
Vector fallback_embed(const std::string& text, Index dim, std::uint64_t seed);

// Slot/sign the fallback embedder assigns to one token (test hook).
std::size_t fallback_token_slot(const std::string& token, Index dim, std::uint64_t seed);
int fallback_token_sign(const std::string& token, std::uint64_t seed);

// Fallback-embeds every corpus patent's prepared sequence.
VectorTable fallback_embed_corpus(const CorpusIndex& corpus, Index dim,
                                  std::uint64_t seed, std::size_t max_tokens = 256);

// sequences.tsv (patent_id \t text) for feeding any external encoder.
void emit_sequences(const CorpusIndex& corpus, const std::string& path,
                    std::size_t max_tokens = 256);

}  // namespace patret
