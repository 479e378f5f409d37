#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "toc/exemplar.hpp"
#include "toc/passage.hpp"

namespace toc {

using NodeId = std::int64_t;

// One parsed DQ/DA candidate from model output.
struct Disambiguation {
    std::string dq;
    std::vector<std::string> answers;
    std::optional<NodeId> source_node;
};

using WarnFn = std::function<void(const std::string&)>;

// The five prompt sections, rendered in this order and joined by blank
// lines. Empty sections are skipped.
struct PromptBundle {
    std::string instruction;
    std::string format_block;
    std::vector<std::string> exemplar_blocks;
    std::string context_block;
    std::string question_block;

    std::string render() const;
};

// Instruction, format description, few-shot exemplars, numbered context
// entries "[i] title | text", then "Question: {question}" as the final
// line.
std::string render_clarification_prompt(std::span<const Exemplar> exemplars,
                                        std::span<const Passage> passages,
                                        const std::string& question);

// Same layout with the Disambiguations block filled in; ends with
// "Answer:" to elicit only the long-form continuation.
std::string render_answer_prompt(std::span<const Exemplar> exemplars,
                                 std::span<const Passage> passages, const std::string& aq,
                                 std::span<const Disambiguation> disambiguations);

// Single-passage verdict prompt: no exemplars, no format block.
std::string render_verification_prompt(const std::string& aq,
                                       const std::string& proposed_answer,
                                       const Passage& passage);

// Clarification-free fallback: exemplars shrink to Question/Answer
// demonstrations and no Disambiguations block appears anywhere.
std::string render_direct_answer_prompt(std::span<const Exemplar> exemplars,
                                        std::span<const Passage> passages,
                                        const std::string& question);

// Extracts (DQ i, DA i) pairs with matching indices, in index order.
// DA lines split on ";" with per-answer trimming. Parsing stops at the
// trailing "Answer:" block. Zero well-formed pairs raise
// NoDisambiguations; a DQ with no matching DA is dropped with a warning.
std::vector<Disambiguation> parse_disambiguations(const std::string& model_text,
                                                  const WarnFn& warn = nullptr);

// Case-insensitive scan for the first standalone "true" or "false"
// token. Neither present raises UnparseableVerdict.
bool parse_verdict(const std::string& model_text);

} // namespace toc
