#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "toc/exemplar.hpp"
#include "toc/llm.hpp"
#include "toc/passage.hpp"
#include "toc/prompts.hpp"
#include "toc/rank.hpp"

namespace toc {

enum class NodeStatus { root, valid, pruned_duplicate, pruned_verification, restored };

std::string to_string(NodeStatus s);
NodeStatus node_status_from_string(const std::string& s);

struct TreeNode {
    NodeId id = 0;
    std::optional<NodeId> parent;
    int depth = 0;
    std::string question; // AQ at the root, DQ elsewhere
    std::vector<std::string> answers;
    NodeStatus status = NodeStatus::root;
    std::optional<std::string> evidence; // verification passage id
};

struct TreeCounters {
    int valid_count = 0;
    int consecutive_failures = 0;
    int llm_calls = 0;
};

struct ClarificationTree {
    std::vector<TreeNode> nodes; // indexed by id
    std::vector<NodeId> bfs_order;
    TreeCounters counters;

    const TreeNode& root() const { return nodes.front(); }
    const TreeNode& node(NodeId id) const { return nodes.at(static_cast<std::size_t>(id)); }

    nlohmann::json to_json() const;
    static ClarificationTree from_json(const nlohmann::json& j);
};

// Every knob the pipeline fixes. Defaults follow the reference setup:
// 5-shot prompts, top-5 passages, 10 valid nodes, 20-call budget.
struct PipelineConfig {
    int k_shots = 5;
    int top_k_passages = 5;
    int max_valid_nodes = 10;
    int max_depth = 3;
    int failure_limit = 3;
    int call_cap = 20;
    int pool_cap = 250;
    int answer_max_disambiguations = 10;
    int answer_max_passages = 5;

    void validate() const; // throws ConfigError
};

// Shared collaborators for tree building and answer generation.
struct Services {
    std::span<const Exemplar> exemplars;
    PassageScorer* scorer = nullptr;
    CompletionBackend* backend = nullptr;
    CallBudget* budget = nullptr;
    WarnFn warn;

    void note(const std::string& msg) const {
        if (warn) warn(msg);
    }
};

// One clarification step: rerank the pool against the node's question,
// pick exemplars, prompt once, parse. Empty result means the expansion
// failed; BudgetExceeded propagates as the terminal signal.
std::vector<Disambiguation> expand_node(const TreeNode& node, const PassagePool& pool,
                                        const PipelineConfig& config,
                                        const Services& services);

// True iff the candidate DQ matches any existing node's question
// (root AQ included) after normalization.
bool is_duplicate(const Disambiguation& candidate, const ClarificationTree& tree);

struct Verification {
    bool verdict = false;
    std::optional<Passage> evidence;
};

// Picks the most relevant answer-containing passage, asks the model
// whether the candidate's first answer could answer the AQ. No
// answer-containing passage prunes without a model call.
Verification verify_candidate(const Disambiguation& candidate, const std::string& aq,
                              const PassagePool& pool, const Services& services);

// BFS exploration with dedup and self-verification pruning. Stops at
// max_valid_nodes, an exhausted frontier, failure_limit consecutive
// empty expansions, the depth limit, or budget exhaustion.
ClarificationTree build_tree(const std::string& aq, const PassagePool& pool,
                             const PipelineConfig& config, const Services& services);

// Flips pruned_verification nodes to restored, shallowest first then
// creation order, until valid+restored reaches needed. Duplicate prunes
// are never restored. Idempotent once the target is met.
void restore_pruned(ClarificationTree& tree, int needed);

enum class Ambiguity { ambiguous, unambiguous };

std::string to_string(Ambiguity a);

// Unambiguous iff no node passed verification (pre-restoration).
Ambiguity classify_ambiguity(const ClarificationTree& tree);

} // namespace toc
