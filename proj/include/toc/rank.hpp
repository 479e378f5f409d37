#pragma once

#include <span>
#include <string>
#include <vector>

#include "toc/embedding.hpp"
#include "toc/exemplar.hpp"
#include "toc/passage.hpp"

namespace toc {

// Scoring function behind rerank. The default is cosine over hashed
// embeddings; a remote HTTP scorer satisfies the same contract.
class PassageScorer {
public:
    virtual ~PassageScorer() = default;
    virtual std::vector<double> score(const std::string& query,
                                      std::span<const Passage> passages) const = 0;
};

class CosineScorer : public PassageScorer {
public:
    explicit CosineScorer(int dim = kDefaultEmbeddingDim) : dim_(dim) {}
    std::vector<double> score(const std::string& query,
                              std::span<const Passage> passages) const override;

private:
    int dim_;
};

// POST {"query","candidates":[...]} to the endpoint, expecting
// {"scores":[...]} of equal length.
class RemoteScorer : public PassageScorer {
public:
    explicit RemoteScorer(std::string endpoint) : endpoint_(std::move(endpoint)) {}
    std::vector<double> score(const std::string& query,
                              std::span<const Passage> passages) const override;

private:
    std::string endpoint_;
};

// Top-k passages by scorer score descending, ties by ascending id.
// Scores are attached to the returned passages. Empty input yields an
// empty list.
std::vector<Passage> rerank(const std::string& query, std::span<const Passage> passages,
                            int k, const PassageScorer& scorer);

std::vector<Passage> rerank(const std::string& query, std::span<const Passage> passages,
                            int k);

std::vector<Passage> rerank(const std::string& query, const PassagePool& pool, int k,
                            const PassageScorer& scorer);

std::vector<Passage> rerank(const std::string& query, const PassagePool& pool, int k);

// min(k, |store|) exemplars with highest cosine similarity to the
// question, ties by store order. Exhaustive nearest-neighbor search.
std::vector<Exemplar> select_exemplars(const std::string& question,
                                       std::span<const Exemplar> store, int k);

} // namespace toc
