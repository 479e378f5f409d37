#pragma once

#include <string>
#include <vector>

#include "toc/tree.hpp"

namespace toc {

struct LongFormAnswer {
    std::string text;
    std::vector<NodeId> used_disambiguations;
    std::vector<std::string> used_passages;
    Ambiguity ambiguity = Ambiguity::unambiguous;
    bool used_fallback = false;
};

// Valid nodes in BFS order, capped at max. A tree with zero valid nodes
// gets one pruned node restored first; if nothing usable remains, throws
// NoInterpretations so the caller can fall back to direct answering.
std::vector<Disambiguation> select_disambiguations(ClarificationTree& tree, int max = 10);

// Answer-containing passages first (normalized substring match against
// any selected answer), each partition ordered by relevance to the AQ.
std::vector<Passage> select_evidence(const PassagePool& pool,
                                     std::span<const Disambiguation> selected,
                                     const std::string& aq, const PassageScorer& scorer,
                                     int max = 5);

// One model call producing the final long-form answer; falls back to a
// clarification-free prompt when the tree offers no interpretations.
LongFormAnswer generate_answer(const std::string& aq, ClarificationTree& tree,
                               const PassagePool& pool, const PipelineConfig& config,
                               const Services& services);

} // namespace toc
