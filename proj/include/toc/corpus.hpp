#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "toc/passage.hpp"

namespace toc {

struct Document {
    std::string title;
    std::string text;
};

inline constexpr int kDefaultPassageTokenLimit = 120;

// Immutable BM25 index over a passage corpus. Stand-in for the dense
// retriever: same contract, ranked passages out.
class CorpusIndex {
public:
    static constexpr double kK1 = 1.2;
    static constexpr double kB = 0.75;

    // Splits each document into passages of at most max_passage_tokens
    // whitespace tokens, dedupes exact (title, text) documents, then
    // indexes. Throws EmptyCorpus when no document survives.
    static CorpusIndex build(std::span<const Document> documents,
                             int max_passage_tokens = kDefaultPassageTokenLimit);

    int doc_count() const { return static_cast<int>(passages_.size()); }
    double average_length() const { return avg_length_; }
    const std::vector<Passage>& passages() const { return passages_; }

    // Top-k passages by BM25 score (k1=1.2, b=0.75), score descending,
    // ties by ascending id. Passages matching no query term are omitted.
    std::vector<Passage> search(const std::string& query, int k) const;

    double idf(const std::string& term) const;

    void save(const std::string& dir) const;
    static CorpusIndex load(const std::string& dir);

private:
    std::vector<Passage> passages_;
    std::vector<std::unordered_map<std::string, int>> term_freqs_;
    std::vector<int> lengths_;
    std::unordered_map<std::string, int> doc_freq_;
    double avg_length_ = 0.0;

    void index_passages();
};

// Reads a JSON Lines corpus file: one object per line with "title" and
// "text". Malformed lines raise MalformedRecord naming the line number.
std::vector<Document> read_jsonl_corpus(const std::string& path);

CorpusIndex ingest_corpus(std::span<const Document> documents,
                          int max_passage_tokens = kDefaultPassageTokenLimit);

std::vector<Passage> local_search(const CorpusIndex& index, const std::string& query, int k);

} // namespace toc
