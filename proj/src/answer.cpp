#include "toc/answer.hpp"

#include <algorithm>

#include "toc/errors.hpp"
#include "toc/text.hpp"

namespace toc {

namespace {

std::vector<Disambiguation> collect_usable(const ClarificationTree& tree, int max) {
    std::vector<Disambiguation> out;
    for (NodeId id : tree.bfs_order) {
        const TreeNode& n = tree.node(id);
        if (n.status != NodeStatus::valid && n.status != NodeStatus::restored) continue;
        out.push_back({n.question, n.answers, n.id});
        if (static_cast<int>(out.size()) >= max) break;
    }
    return out;
}

} // namespace

std::vector<Disambiguation> select_disambiguations(ClarificationTree& tree, int max) {
    auto selected = collect_usable(tree, max);
    if (selected.empty()) {
        restore_pruned(tree, 1);
        selected = collect_usable(tree, max);
    }
    if (selected.empty()) throw NoInterpretations();
    return selected;
}

std::vector<Passage> select_evidence(const PassagePool& pool,
                                     std::span<const Disambiguation> selected,
                                     const std::string& aq, const PassageScorer& scorer,
                                     int max) {
    std::vector<Passage> containing;
    std::vector<Passage> rest;
    for (const auto& p : pool.passages) {
        bool hit = false;
        for (const auto& d : selected) {
            for (const auto& a : d.answers)
                if (contains_normalized(p.text, a)) {
                    hit = true;
                    break;
                }
            if (hit) break;
        }
        (hit ? containing : rest).push_back(p);
    }

    auto ranked_containing =
        rerank(aq, containing, static_cast<int>(containing.size()), scorer);
    auto ranked_rest = rerank(aq, rest, static_cast<int>(rest.size()), scorer);

    std::vector<Passage> out;
    for (auto& p : ranked_containing) {
        if (static_cast<int>(out.size()) >= max) return out;
        out.push_back(std::move(p));
    }
    for (auto& p : ranked_rest) {
        if (static_cast<int>(out.size()) >= max) return out;
        out.push_back(std::move(p));
    }
    return out;
}

LongFormAnswer generate_answer(const std::string& aq, ClarificationTree& tree,
                               const PassagePool& pool, const PipelineConfig& config,
                               const Services& services) {
    LongFormAnswer result;
    result.ambiguity = classify_ambiguity(tree);

    std::vector<Exemplar> shots = select_exemplars(aq, services.exemplars, config.k_shots);

    CompletionRequest request;
    try {
        auto selected = select_disambiguations(tree, config.answer_max_disambiguations);
        auto evidence = select_evidence(pool, selected, aq, *services.scorer,
                                        config.answer_max_passages);
        request.prompt = render_answer_prompt(shots, evidence, aq, selected);
        for (const auto& d : selected)
            if (d.source_node) result.used_disambiguations.push_back(*d.source_node);
        for (const auto& p : evidence) result.used_passages.push_back(p.id);
    } catch (const NoInterpretations&) {
        services.note("no usable interpretations; answering without clarifications");
        auto evidence =
            rerank(aq, pool.passages, config.answer_max_passages, *services.scorer);
        request.prompt = render_direct_answer_prompt(shots, evidence, aq);
        for (const auto& p : evidence) result.used_passages.push_back(p.id);
        result.used_fallback = true;
    }

    CompletionResponse response = complete(*services.backend, request, *services.budget);
    result.text = trim_copy(response.text);
    return result;
}

} // namespace toc
