#include "toc/embedding.hpp"

#include <cmath>

#include "toc/errors.hpp"
#include "toc/text.hpp"

namespace toc {

double EmbeddingVector::dot(const EmbeddingVector& other) const {
    double sum = 0.0;
    std::size_t n = std::min(components.size(), other.components.size());
    for (std::size_t i = 0; i < n; ++i) sum += components[i] * other.components[i];
    return sum;
}

EmbeddingVector embed(const std::string& text, int dim) {
    auto tokens = normalize_tokens(text);
    if (tokens.empty()) throw EmptyQuery("embed: text normalizes to zero tokens");

    EmbeddingVector v;
    v.components.assign(static_cast<std::size_t>(dim), 0.0);
    for (const auto& token : tokens) {
        std::uint64_t h = fnv1a64(token);
        std::size_t bucket = static_cast<std::size_t>(h % static_cast<std::uint64_t>(dim));
        double sign = (h >> 63) ? -1.0 : 1.0;
        v.components[bucket] += sign;
    }
    double norm = std::sqrt(v.dot(v));
    if (norm > 0.0) {
        for (auto& c : v.components) c /= norm;
    } else {
        // signed counts cancelled exactly; fall back to a deterministic unit vector
        v.components[static_cast<std::size_t>(fnv1a64(tokens.front()) %
                                              static_cast<std::uint64_t>(dim))] = 1.0;
    }
    return v;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    return a.dot(b); // both unit norm
}

} // namespace toc
