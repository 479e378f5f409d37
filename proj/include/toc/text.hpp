#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace toc {

// Splits on runs of whitespace. No case folding.
std::vector<std::string> whitespace_tokens(std::string_view text);

// Lowercase, strip punctuation, collapse whitespace. Used for dedup keys
// and substring containment checks across the pipeline.
std::string normalize_text(std::string_view text);

// normalize_text, then split. Token stream backing the lexical index and
// the hashed embeddings.
std::vector<std::string> normalize_tokens(std::string_view text);

// Lowercase, strip punctuation, drop the articles a/an/the, split on
// whitespace. Backs all F1-style metrics.
std::vector<std::string> normalize_answer(std::string_view text);

// True iff normalize_text(needle) occurs as a substring of
// normalize_text(hay). Empty needle never matches.
bool contains_normalized(std::string_view hay, std::string_view needle);

// Leading/trailing ASCII whitespace removed.
std::string trim_copy(std::string_view text);

// FNV-1a, 64-bit.
std::uint64_t fnv1a64(std::string_view data);

// fnv1a64 rendered as 16 lowercase hex digits. Stable fixture key.
std::string hash_hex(std::string_view data);

} // namespace toc
