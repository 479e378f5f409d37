#include "toc/rank.hpp"

#include <algorithm>
#include <numeric>

#include <httplib.h>
#include <json.hpp>

#include "toc/errors.hpp"
#include "toc/http_util.hpp"
#include "toc/text.hpp"

namespace toc {

std::vector<double> CosineScorer::score(const std::string& query,
                                        std::span<const Passage> passages) const {
    EmbeddingVector q = embed(query, dim_);
    std::vector<double> scores;
    scores.reserve(passages.size());
    for (const auto& p : passages) {
        try {
            scores.push_back(cosine(q, embed(passage_repr(p), dim_)));
        } catch (const EmptyQuery&) {
            scores.push_back(0.0); // passage text normalizes to nothing
        }
    }
    return scores;
}

std::vector<double> RemoteScorer::score(const std::string& query,
                                        std::span<const Passage> passages) const {
    nlohmann::json body;
    body["query"] = query;
    body["candidates"] = nlohmann::json::array();
    for (const auto& p : passages) body["candidates"].push_back(passage_repr(p));

    auto [client, path] = make_http_client(endpoint_);
    auto res = client->Post(path, body.dump(), "application/json");
    if (!res) throw RetrievalUnavailable("remote scorer unreachable: " + endpoint_);
    if (res->status < 200 || res->status >= 300)
        throw RetrievalUnavailable("remote scorer returned status " +
                                       std::to_string(res->status),
                                   res->status);
    nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("scores") || !reply["scores"].is_array() ||
        reply["scores"].size() != passages.size())
        throw RetrievalUnavailable("remote scorer reply malformed");
    return reply["scores"].get<std::vector<double>>();
}

std::vector<Passage> rerank(const std::string& query, std::span<const Passage> passages,
                            int k, const PassageScorer& scorer) {
    if (passages.empty() || k <= 0) return {};
    auto scores = scorer.score(query, passages);

    std::vector<std::size_t> order(passages.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return passages[a].id < passages[b].id;
    });
    if (static_cast<int>(order.size()) > k) order.resize(static_cast<std::size_t>(k));

    std::vector<Passage> out;
    out.reserve(order.size());
    for (std::size_t idx : order) {
        Passage p = passages[idx];
        p.score = scores[idx];
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Passage> rerank(const std::string& query, std::span<const Passage> passages,
                            int k) {
    CosineScorer scorer;
    return rerank(query, passages, k, scorer);
}

std::vector<Passage> rerank(const std::string& query, const PassagePool& pool, int k,
                            const PassageScorer& scorer) {
    return rerank(query, std::span<const Passage>(pool.passages), k, scorer);
}

std::vector<Passage> rerank(const std::string& query, const PassagePool& pool, int k) {
    CosineScorer scorer;
    return rerank(query, std::span<const Passage>(pool.passages), k, scorer);
}

std::vector<Exemplar> select_exemplars(const std::string& question,
                                       std::span<const Exemplar> store, int k) {
    if (store.empty()) throw EmptyExemplarStore();
    EmbeddingVector q = embed(question);

    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(store.size());
    for (std::size_t i = 0; i < store.size(); ++i) {
        double sim = 0.0;
        try {
            sim = cosine(q, embed(store[i].question));
        } catch (const EmptyQuery&) {
            sim = -1.0;
        }
        scored.emplace_back(sim, i);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::size_t take = std::min(scored.size(), static_cast<std::size_t>(k));

    std::vector<Exemplar> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(store[scored[i].second]);
    return out;
}

} // namespace toc
