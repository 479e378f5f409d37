#pragma once

#include <string>
#include <vector>

namespace toc {

struct DisambiguationPair {
    std::string dq;
    std::vector<std::string> answers;
};

// A solved training instance inserted into prompts as a few-shot
// demonstration.
struct Exemplar {
    std::string question;
    std::vector<DisambiguationPair> disambiguations;
    std::string long_answer;
};

// JSON array of {"question", "disambiguations":[{"dq","answers":[...]}],
// "long_answer"}. Validates that every exemplar has at least one
// disambiguation and every disambiguation at least one answer.
std::vector<Exemplar> load_exemplar_store(const std::string& path);

} // namespace toc
