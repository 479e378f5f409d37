#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "toc/passage.hpp"

namespace toc {

struct GoldDisambiguation {
    std::string dq;
    std::vector<std::string> gold_answers;
};

struct EvalExample {
    std::string aq;
    std::vector<GoldDisambiguation> gold_disambiguations;
    std::vector<std::string> gold_long_answers; // exactly two references

    // Throws DatasetError; context prefixes the message ("dev[2]").
    void validate(const std::string& context = {}) const;
};

struct PerQuestionScore {
    std::string question_id;
    std::string aq;
    double d_f1 = 0.0;
    double rouge_l = 0.0;
    double dr = 0.0;
    std::optional<double> answer_f1;
    std::map<int, double> ac_at;
};

struct EvalReport {
    double d_f1 = 0.0;
    double rouge_l = 0.0;
    double dr = 0.0;
    std::optional<double> answer_f1;
    std::vector<PerQuestionScore> per_question;
};

struct RetrievalReport {
    std::map<int, double> ac_at; // k -> coverage in [0,100]
};

// Bag-of-tokens F1 over SQuAD-normalized tokens, max over golds.
// Both sides empty scores 1.0, exactly one empty scores 0.0.
double token_f1(const std::string& pred, std::span<const std::string> golds);

// LCS F-measure over lowercased whitespace tokens, max over references.
double rouge_l(const std::string& pred, std::span<const std::string> refs);

// Geometric mean of the two aggregate scores.
double dr(double d_f1, double rouge_l);

// Pulls a short answer for one DQ out of a long-form answer.
class AnswerExtractor {
public:
    virtual ~AnswerExtractor() = default;
    virtual std::string extract(const std::string& long_answer, const std::string& dq,
                                std::span<const std::string> gold_answers) const = 0;
};

// Slides 1..6-token windows over the long answer and keeps the best
// scorer. Oracle mode scores windows against the gold answers; blind
// mode scores against the DQ text. Ties go to the earliest window.
class WindowExtractor : public AnswerExtractor {
public:
    enum class Mode { oracle, blind };

    explicit WindowExtractor(Mode mode = Mode::oracle) : mode_(mode) {}

    std::string extract(const std::string& long_answer, const std::string& dq,
                        std::span<const std::string> gold_answers) const override;

private:
    Mode mode_;
};

std::string extract_answer(const std::string& long_answer, const std::string& dq,
                           std::span<const std::string> gold_answers,
                           const AnswerExtractor& extractor);

// Mean token F1 of per-DQ extractions, scaled to [0,100].
double disambig_f1(const std::string& long_answer, const EvalExample& example,
                   const AnswerExtractor& extractor);

// Max token F1 over every (pred, gold) pair, scaled to [0,100].
double answer_f1(std::span<const std::string> pred_answers,
                 std::span<const std::string> gold_answers);

// Fraction of gold DQs whose answers appear in the top-k passages.
RetrievalReport answer_coverage(std::span<const Passage> ranked, const EvalExample& example,
                                std::span<const int> ks);

} // namespace toc
