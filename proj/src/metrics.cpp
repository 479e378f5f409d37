#include "toc/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "toc/errors.hpp"
#include "toc/text.hpp"

namespace toc {

namespace {

std::map<std::string, int> token_bag(std::span<const std::string> tokens) {
    std::map<std::string, int> bag;
    for (const auto& t : tokens) bag[t] += 1;
    return bag;
}

double bag_f1(std::span<const std::string> pred, std::span<const std::string> gold) {
    if (pred.empty() && gold.empty()) return 1.0;
    if (pred.empty() || gold.empty()) return 0.0;

    auto pred_bag = token_bag(pred);
    auto gold_bag = token_bag(gold);
    int overlap = 0;
    for (const auto& [token, count] : pred_bag) {
        auto it = gold_bag.find(token);
        if (it != gold_bag.end()) overlap += std::min(count, it->second);
    }
    if (overlap == 0) return 0.0;
    double p = static_cast<double>(overlap) / static_cast<double>(pred.size());
    double r = static_cast<double>(overlap) / static_cast<double>(gold.size());
    return 2.0 * p * r / (p + r);
}

std::vector<std::string> lower_tokens(const std::string& text) {
    std::string lowered;
    lowered.reserve(text.size());
    for (char c : text)
        lowered.push_back(
            static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return whitespace_tokens(lowered);
}

int lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
    std::vector<int> prev(b.size() + 1, 0);
    std::vector<int> cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

} // namespace

void EvalExample::validate(const std::string& context) const {
    auto fail = [&](const std::string& what) {
        throw DatasetError(context.empty() ? what : context + ": " + what);
    };
    if (aq.empty()) fail("aq must be non-empty");
    if (gold_disambiguations.empty()) fail("gold_disambiguations must be non-empty");
    for (std::size_t i = 0; i < gold_disambiguations.size(); ++i) {
        const auto& d = gold_disambiguations[i];
        if (d.dq.empty())
            fail("gold_disambiguations[" + std::to_string(i) + "].dq must be non-empty");
        if (d.gold_answers.empty())
            fail("gold_disambiguations[" + std::to_string(i) +
                 "].answers must be non-empty");
    }
    if (gold_long_answers.size() != 2)
        fail("gold_long_answers must contain exactly 2 entries");
}

double token_f1(const std::string& pred, std::span<const std::string> golds) {
    auto pred_tokens = normalize_answer(pred);
    double best = 0.0;
    for (const auto& gold : golds) {
        auto gold_tokens = normalize_answer(gold);
        best = std::max(best, bag_f1(pred_tokens, gold_tokens));
    }
    return best;
}

double rouge_l(const std::string& pred, std::span<const std::string> refs) {
    auto pred_tokens = lower_tokens(pred);
    double best = 0.0;
    for (const auto& ref : refs) {
        auto ref_tokens = lower_tokens(ref);
        if (pred_tokens.empty() || ref_tokens.empty()) continue;
        int lcs = lcs_length(pred_tokens, ref_tokens);
        if (lcs == 0) continue;
        double p = static_cast<double>(lcs) / static_cast<double>(pred_tokens.size());
        double r = static_cast<double>(lcs) / static_cast<double>(ref_tokens.size());
        best = std::max(best, 2.0 * p * r / (p + r));
    }
    return best;
}

double dr(double d_f1, double rouge_l) { return std::sqrt(d_f1 * rouge_l); }

std::string WindowExtractor::extract(const std::string& long_answer, const std::string& dq,
                                     std::span<const std::string> gold_answers) const {
    auto tokens = whitespace_tokens(long_answer);
    if (tokens.empty()) return {};

    std::vector<std::string> blind_target;
    std::span<const std::string> targets = gold_answers;
    if (mode_ == Mode::blind) {
        blind_target.push_back(dq);
        targets = blind_target;
    }

    std::string best;
    double best_score = 0.0;
    for (std::size_t start = 0; start < tokens.size(); ++start) {
        std::string window;
        for (std::size_t len = 1; len <= 6 && start + len <= tokens.size(); ++len) {
            if (len > 1) window += ' ';
            window += tokens[start + len - 1];
            double score = token_f1(window, targets);
            if (score > best_score) {
                best_score = score;
                best = window;
            }
        }
    }
    return best;
}

std::string extract_answer(const std::string& long_answer, const std::string& dq,
                           std::span<const std::string> gold_answers,
                           const AnswerExtractor& extractor) {
    if (long_answer.empty()) return {};
    return extractor.extract(long_answer, dq, gold_answers);
}

double disambig_f1(const std::string& long_answer, const EvalExample& example,
                   const AnswerExtractor& extractor) {
    example.validate();
    double total = 0.0;
    for (const auto& gold : example.gold_disambiguations) {
        std::string extracted =
            extract_answer(long_answer, gold.dq, gold.gold_answers, extractor);
        total += token_f1(extracted, gold.gold_answers);
    }
    return 100.0 * total / static_cast<double>(example.gold_disambiguations.size());
}

double answer_f1(std::span<const std::string> pred_answers,
                 std::span<const std::string> gold_answers) {
    if (pred_answers.empty()) return 0.0;
    double best = 0.0;
    for (const auto& pred : pred_answers)
        best = std::max(best, token_f1(pred, gold_answers));
    return 100.0 * best;
}

RetrievalReport answer_coverage(std::span<const Passage> ranked, const EvalExample& example,
                                std::span<const int> ks) {
    RetrievalReport report;
    for (int k : ks) {
        int covered = 0;
        auto top = ranked.subspan(
            0, std::min(ranked.size(), static_cast<std::size_t>(std::max(k, 0))));
        for (const auto& gold : example.gold_disambiguations) {
            bool hit = false;
            for (const auto& p : top) {
                for (const auto& answer : gold.gold_answers)
                    if (contains_normalized(p.text, answer)) {
                        hit = true;
                        break;
                    }
                if (hit) break;
            }
            if (hit) ++covered;
        }
        report.ac_at[k] = 100.0 * static_cast<double>(covered) /
                          static_cast<double>(example.gold_disambiguations.size());
    }
    return report;
}

} // namespace toc
