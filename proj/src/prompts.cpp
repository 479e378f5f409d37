#include "toc/prompts.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "toc/errors.hpp"
#include "toc/prompt_templates.hpp"

namespace toc {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string join_answers(std::span<const std::string> answers) {
    std::string out;
    for (const auto& a : answers) {
        if (!out.empty()) out += "; ";
        out += a;
    }
    return out;
}

std::string context_block(std::span<const Passage> passages) {
    std::string out = "Context:";
    int i = 1;
    for (const auto& p : passages) {
        out += "\n[" + std::to_string(i++) + "] " + passage_repr(p);
    }
    return out;
}

std::string pair_lines(std::span<const DisambiguationPair> pairs) {
    std::string out;
    int i = 1;
    for (const auto& pair : pairs) {
        if (!out.empty()) out += "\n";
        out += "DQ " + std::to_string(i) + ": " + pair.dq;
        out += "\nDA " + std::to_string(i) + ": " + join_answers(pair.answers);
        ++i;
    }
    return out;
}

std::string exemplar_block(const Exemplar& ex) {
    return "Context:\n\nQuestion: " + ex.question + "\n\nDisambiguations:\n" +
           pair_lines(ex.disambiguations) + "\n\nAnswer: " + ex.long_answer;
}

std::string exemplar_block_direct(const Exemplar& ex) {
    return "Context:\n\nQuestion: " + ex.question + "\n\nAnswer: " + ex.long_answer;
}

// Parses a "DQ <n>:" or "DA <n>:" line; returns the index and the text
// after the colon, or nullopt when the line is not of that shape.
std::optional<std::pair<int, std::string>> parse_marker_line(std::string_view line,
                                                             std::string_view marker) {
    std::size_t pos = 0;
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (line.substr(pos, marker.size()) != marker) return std::nullopt;
    pos += marker.size();
    std::size_t digits_begin = pos;
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos == digits_begin) return std::nullopt; // require whitespace before the index
    std::size_t num_begin = pos;
    while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos == num_begin) return std::nullopt;
    int index = std::stoi(std::string(line.substr(num_begin, pos - num_begin)));
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size() || line[pos] != ':') return std::nullopt;
    ++pos;
    return std::make_pair(index, trim(line.substr(pos)));
}

} // namespace

std::string PromptBundle::render() const {
    std::vector<std::string> sections;
    if (!instruction.empty()) sections.push_back(instruction);
    if (!format_block.empty()) sections.push_back(format_block);
    for (const auto& block : exemplar_blocks) sections.push_back(block);
    if (!context_block.empty()) sections.push_back(context_block);
    if (!question_block.empty()) sections.push_back(question_block);

    std::string out;
    for (const auto& section : sections) {
        if (!out.empty()) out += "\n\n";
        out += section;
    }
    return out;
}

std::string render_clarification_prompt(std::span<const Exemplar> exemplars,
                                        std::span<const Passage> passages,
                                        const std::string& question) {
    if (passages.empty()) throw MissingContext();
    PromptBundle bundle;
    bundle.instruction = templates::kClarificationInstruction;
    bundle.format_block = templates::kFormatBlock;
    for (const auto& ex : exemplars) bundle.exemplar_blocks.push_back(exemplar_block(ex));
    bundle.context_block = context_block(passages);
    bundle.question_block = "Question: " + question;
    return bundle.render();
}

std::string render_answer_prompt(std::span<const Exemplar> exemplars,
                                 std::span<const Passage> passages, const std::string& aq,
                                 std::span<const Disambiguation> disambiguations) {
    if (disambiguations.empty()) throw MissingDisambiguations();
    if (passages.empty()) throw MissingContext();

    std::string pairs;
    int i = 1;
    for (const auto& d : disambiguations) {
        if (!pairs.empty()) pairs += "\n";
        pairs += "DQ " + std::to_string(i) + ": " + d.dq;
        pairs += "\nDA " + std::to_string(i) + ": " + join_answers(d.answers);
        ++i;
    }

    PromptBundle bundle;
    bundle.instruction = templates::kClarificationInstruction;
    bundle.format_block = templates::kFormatBlock;
    for (const auto& ex : exemplars) bundle.exemplar_blocks.push_back(exemplar_block(ex));
    bundle.context_block = context_block(passages);
    bundle.question_block =
        "Question: " + aq + "\n\nDisambiguations:\n" + pairs + "\n\nAnswer:";
    return bundle.render();
}

std::string render_verification_prompt(const std::string& aq,
                                       const std::string& proposed_answer,
                                       const Passage& passage) {
    if (aq.empty() || proposed_answer.empty() || passage.text.empty())
        throw Error("verification prompt requires aq, answer, and passage text");
    PromptBundle bundle;
    bundle.instruction = templates::kVerificationInstruction;
    bundle.context_block = "Context:\n" + passage_repr(passage);
    bundle.question_block =
        "Question: " + aq + "\n\nProposed Answer: " + proposed_answer;
    return bundle.render();
}

std::string render_direct_answer_prompt(std::span<const Exemplar> exemplars,
                                        std::span<const Passage> passages,
                                        const std::string& question) {
    if (passages.empty()) throw MissingContext();
    PromptBundle bundle;
    bundle.instruction = templates::kClarificationInstruction;
    for (const auto& ex : exemplars)
        bundle.exemplar_blocks.push_back(exemplar_block_direct(ex));
    bundle.context_block = context_block(passages);
    bundle.question_block = "Question: " + question + "\n\nAnswer:";
    return bundle.render();
}

std::vector<Disambiguation> parse_disambiguations(const std::string& model_text,
                                                  const WarnFn& warn) {
    std::map<int, std::string> dqs;
    std::map<int, std::vector<std::string>> das;

    std::istringstream lines(model_text);
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = trim(line);
        if (trimmed.rfind("Answer:", 0) == 0) break; // trailing long-form block

        if (auto dq = parse_marker_line(line, "DQ")) {
            if (!dq->second.empty()) dqs.emplace(dq->first, dq->second);
            continue;
        }
        if (auto da = parse_marker_line(line, "DA")) {
            std::vector<std::string> answers;
            std::istringstream parts(da->second);
            std::string part;
            while (std::getline(parts, part, ';')) {
                std::string a = trim(part);
                if (!a.empty()) answers.push_back(std::move(a));
            }
            if (!answers.empty()) das.emplace(da->first, std::move(answers));
        }
    }

    std::vector<Disambiguation> out;
    for (const auto& [index, dq] : dqs) {
        auto it = das.find(index);
        if (it == das.end()) {
            if (warn)
                warn("DQ " + std::to_string(index) + " has no matching DA line; dropped");
            continue;
        }
        out.push_back({dq, it->second, std::nullopt});
    }
    if (out.empty()) throw NoDisambiguations();
    return out;
}

bool parse_verdict(const std::string& model_text) {
    std::string token;
    auto check = [&](const std::string& t) -> std::optional<bool> {
        if (t == "true") return true;
        if (t == "false") return false;
        return std::nullopt;
    };
    for (char c : model_text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!token.empty()) {
            if (auto v = check(token)) return *v;
            token.clear();
        }
    }
    if (!token.empty()) {
        if (auto v = check(token)) return *v;
    }
    throw UnparseableVerdict();
}

} // namespace toc
