#pragma once

#include <string>
#include <vector>

namespace toc {

inline constexpr int kDefaultEmbeddingDim = 256;

// Unit-norm feature-hashed bag-of-words vector. Deterministic local
// stand-in for a neural sentence encoder.
struct EmbeddingVector {
    std::vector<double> components;

    double dot(const EmbeddingVector& other) const;
};

// Hashes normalized tokens into dim signed buckets, then L2-normalizes.
// Identical texts map to identical vectors. Throws EmptyQuery when the
// text normalizes to zero tokens.
EmbeddingVector embed(const std::string& text, int dim = kDefaultEmbeddingDim);

double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

} // namespace toc
