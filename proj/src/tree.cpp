#include "toc/tree.hpp"

#include <algorithm>
#include <deque>

#include <json.hpp>

#include "toc/errors.hpp"
#include "toc/text.hpp"

namespace toc {

std::string to_string(NodeStatus s) {
    switch (s) {
    case NodeStatus::root: return "root";
    case NodeStatus::valid: return "valid";
    case NodeStatus::pruned_duplicate: return "pruned-duplicate";
    case NodeStatus::pruned_verification: return "pruned-verification";
    case NodeStatus::restored: return "restored";
    }
    throw Error("unknown node status");
}

NodeStatus node_status_from_string(const std::string& s) {
    if (s == "root") return NodeStatus::root;
    if (s == "valid") return NodeStatus::valid;
    if (s == "pruned-duplicate") return NodeStatus::pruned_duplicate;
    if (s == "pruned-verification") return NodeStatus::pruned_verification;
    if (s == "restored") return NodeStatus::restored;
    throw Error("unknown node status: " + s);
}

std::string to_string(Ambiguity a) {
    return a == Ambiguity::ambiguous ? "ambiguous" : "unambiguous";
}

void PipelineConfig::validate() const {
    auto positive = [](int v, const char* name) {
        if (v <= 0) throw ConfigError(std::string(name) + " must be positive");
    };
    positive(k_shots, "k_shots");
    positive(top_k_passages, "top_k_passages");
    positive(max_valid_nodes, "max_valid_nodes");
    positive(max_depth, "max_depth");
    positive(failure_limit, "failure_limit");
    positive(call_cap, "call_cap");
    positive(pool_cap, "pool_cap");
    positive(answer_max_disambiguations, "answer_max_disambiguations");
    positive(answer_max_passages, "answer_max_passages");
    if (call_cap < max_valid_nodes)
        throw ConfigError("call_cap must be at least max_valid_nodes");
}

std::vector<Disambiguation> expand_node(const TreeNode& node, const PassagePool& pool,
                                        const PipelineConfig& config,
                                        const Services& services) {
    std::vector<Passage> context =
        rerank(node.question, pool.passages, config.top_k_passages, *services.scorer);
    std::vector<Exemplar> shots =
        select_exemplars(node.question, services.exemplars, config.k_shots);

    CompletionRequest request;
    request.prompt = render_clarification_prompt(shots, context, node.question);
    CompletionResponse response = complete(*services.backend, request, *services.budget);

    try {
        auto pairs = parse_disambiguations(response.text, services.warn);
        for (auto& pair : pairs) pair.source_node = node.id;
        return pairs;
    } catch (const NoDisambiguations&) {
        services.note("expansion of node " + std::to_string(node.id) +
                      " produced no disambiguations");
        return {};
    }
}

bool is_duplicate(const Disambiguation& candidate, const ClarificationTree& tree) {
    const std::string key = normalize_text(candidate.dq);
    return std::any_of(tree.nodes.begin(), tree.nodes.end(), [&](const TreeNode& n) {
        return normalize_text(n.question) == key;
    });
}

Verification verify_candidate(const Disambiguation& candidate, const std::string& aq,
                              const PassagePool& pool, const Services& services) {
    if (candidate.answers.empty()) return {false, std::nullopt};
    const std::string& answer = candidate.answers.front();

    std::vector<Passage> containing;
    for (const auto& p : pool.passages)
        if (contains_normalized(p.text, answer)) containing.push_back(p);
    if (containing.empty()) return {false, std::nullopt};

    std::vector<Passage> top = rerank(aq, containing, 1, *services.scorer);
    const Passage& evidence = top.front();

    CompletionRequest request;
    request.prompt = render_verification_prompt(aq, answer, evidence);
    CompletionResponse response = complete(*services.backend, request, *services.budget);

    bool verdict = false;
    try {
        verdict = parse_verdict(response.text);
    } catch (const UnparseableVerdict&) {
        services.note("unparseable verification verdict for: " + candidate.dq);
    }
    return {verdict, evidence};
}

ClarificationTree build_tree(const std::string& aq, const PassagePool& pool,
                             const PipelineConfig& config, const Services& services) {
    config.validate();

    ClarificationTree tree;
    TreeNode root;
    root.id = 0;
    root.question = aq;
    root.status = NodeStatus::root;
    tree.nodes.push_back(root);
    tree.bfs_order.push_back(0);

    auto add_child = [&](NodeId parent, const Disambiguation& cand, NodeStatus status,
                         const std::optional<Passage>& evidence) -> NodeId {
        TreeNode child;
        child.id = static_cast<NodeId>(tree.nodes.size());
        child.parent = parent;
        child.depth = tree.node(parent).depth + 1;
        child.question = cand.dq;
        child.answers = cand.answers;
        child.status = status;
        if (evidence) child.evidence = evidence->id;
        tree.nodes.push_back(std::move(child));
        tree.bfs_order.push_back(tree.nodes.back().id);
        return tree.nodes.back().id;
    };

    std::deque<NodeId> frontier;
    frontier.push_back(0);

    bool out_of_budget = false;
    while (!frontier.empty() && !out_of_budget) {
        if (tree.counters.valid_count >= config.max_valid_nodes) break;
        if (tree.counters.consecutive_failures >= config.failure_limit) break;

        NodeId current = frontier.front();
        if (tree.node(current).depth >= config.max_depth) {
            frontier.pop_front();
            continue;
        }

        std::vector<Disambiguation> candidates;
        try {
            candidates = expand_node(tree.node(current), pool, config, services);
        } catch (const BudgetExceeded&) {
            out_of_budget = true;
            break;
        }

        bool any_valid = false;
        for (const auto& candidate : candidates) {
            if (tree.counters.valid_count >= config.max_valid_nodes) break;

            if (is_duplicate(candidate, tree)) {
                add_child(current, candidate, NodeStatus::pruned_duplicate, std::nullopt);
                continue;
            }

            Verification check;
            try {
                check = verify_candidate(candidate, aq, pool, services);
            } catch (const BudgetExceeded&) {
                out_of_budget = true; // candidate mid-verification is dropped
                break;
            }

            if (check.verdict) {
                NodeId id = add_child(current, candidate, NodeStatus::valid, check.evidence);
                tree.counters.valid_count += 1;
                frontier.push_back(id);
                any_valid = true;
            } else {
                add_child(current, candidate, NodeStatus::pruned_verification,
                          check.evidence);
            }
        }

        if (!out_of_budget) {
            if (any_valid) {
                // Done with this node; its valid children joined the frontier.
                tree.counters.consecutive_failures = 0;
                frontier.pop_front();
            } else {
                // Failed expansions leave the node queued for another try;
                // the consecutive-failure limit bounds the retries.
                tree.counters.consecutive_failures += 1;
            }
        }
    }

    tree.counters.llm_calls = services.budget ? services.budget->spent() : 0;
    return tree;
}

void restore_pruned(ClarificationTree& tree, int needed) {
    int have = 0;
    for (const auto& n : tree.nodes)
        if (n.status == NodeStatus::valid || n.status == NodeStatus::restored) ++have;

    std::vector<NodeId> candidates;
    for (const auto& n : tree.nodes)
        if (n.status == NodeStatus::pruned_verification) candidates.push_back(n.id);
    std::sort(candidates.begin(), candidates.end(), [&](NodeId a, NodeId b) {
        const TreeNode& na = tree.node(a);
        const TreeNode& nb = tree.node(b);
        if (na.depth != nb.depth) return na.depth < nb.depth;
        return na.id < nb.id;
    });

    for (NodeId id : candidates) {
        if (have >= needed) break;
        tree.nodes[static_cast<std::size_t>(id)].status = NodeStatus::restored;
        ++have;
    }
}

Ambiguity classify_ambiguity(const ClarificationTree& tree) {
    for (const auto& n : tree.nodes)
        if (n.status == NodeStatus::valid) return Ambiguity::ambiguous;
    return Ambiguity::unambiguous;
}

nlohmann::json ClarificationTree::to_json() const {
    nlohmann::json j;
    j["aq"] = root().question;
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : nodes) {
        nlohmann::json nj;
        nj["id"] = n.id;
        nj["parent"] = n.parent ? nlohmann::json(*n.parent) : nlohmann::json(nullptr);
        nj["depth"] = n.depth;
        nj["question"] = n.question;
        nj["answers"] = n.answers;
        nj["status"] = to_string(n.status);
        nj["evidence"] = n.evidence ? nlohmann::json(*n.evidence) : nlohmann::json(nullptr);
        j["nodes"].push_back(std::move(nj));
    }
    j["bfs_order"] = bfs_order;
    j["counters"] = {{"valid_count", counters.valid_count},
                     {"consecutive_failures", counters.consecutive_failures},
                     {"llm_calls", counters.llm_calls}};
    return j;
}

ClarificationTree ClarificationTree::from_json(const nlohmann::json& j) {
    ClarificationTree tree;
    for (const auto& nj : j.at("nodes")) {
        TreeNode n;
        n.id = nj.at("id").get<NodeId>();
        if (!nj.at("parent").is_null()) n.parent = nj.at("parent").get<NodeId>();
        n.depth = nj.at("depth").get<int>();
        n.question = nj.at("question").get<std::string>();
        n.answers = nj.at("answers").get<std::vector<std::string>>();
        n.status = node_status_from_string(nj.at("status").get<std::string>());
        if (!nj.at("evidence").is_null()) n.evidence = nj.at("evidence").get<std::string>();
        tree.nodes.push_back(std::move(n));
    }
    tree.bfs_order = j.at("bfs_order").get<std::vector<NodeId>>();
    const auto& c = j.at("counters");
    tree.counters.valid_count = c.at("valid_count").get<int>();
    tree.counters.consecutive_failures = c.at("consecutive_failures").get<int>();
    tree.counters.llm_calls = c.at("llm_calls").get<int>();
    return tree;
}

} // namespace toc
