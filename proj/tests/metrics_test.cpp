#include <doctest.h>

#include "toc/errors.hpp"
#include "toc/metrics.hpp"
#include "toc/text.hpp"

#include "helpers.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace toc;

namespace {

std::vector<std::string> one(const std::string& s) { return {s}; }

// Reference LCS used to cross-check the production DP.
int lcs_oracle(const std::vector<std::string>& a, const std::vector<std::string>& b,
               std::size_t i = 0, std::size_t j = 0) {
    if (i == a.size() || j == b.size()) return 0;
    if (a[i] == b[j]) return 1 + lcs_oracle(a, b, i + 1, j + 1);
    return std::max(lcs_oracle(a, b, i + 1, j), lcs_oracle(a, b, i, j + 1));
}

std::vector<std::string> lowered_tokens(const std::string& s) {
    std::string lowered;
    for (char c : s)
        lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return whitespace_tokens(lowered);
}

EvalExample olympic_example() {
    EvalExample ex;
    ex.aq = testutil::kOlympicAq;
    ex.gold_disambiguations = {{testutil::kGoldDq, {"United States"}},
                               {testutil::kWinterDq, {"Norway"}}};
    ex.gold_long_answers = {testutil::kOlympicLongAnswer,
                            "The United States leads overall while Norway leads the winter count."};
    return ex;
}

} // namespace

TEST_CASE("token_f1 basics") {
    CHECK(token_f1("Chris Rankin", one("Chris Rankin")) == doctest::Approx(1.0));
    CHECK(token_f1("the Yankees", one("New York Yankees")) == doctest::Approx(0.5));
    CHECK(token_f1("apples", one("oranges")) == doctest::Approx(0.0));
    CHECK(token_f1("U.S.A.", one("USA")) == doctest::Approx(1.0));
}

TEST_CASE("token_f1 empty conventions") {
    CHECK(token_f1("", one("")) == doctest::Approx(1.0));
    // articles normalize away entirely
    CHECK(token_f1("the", one("an")) == doctest::Approx(1.0));
    CHECK(token_f1("", one("something")) == doctest::Approx(0.0));
    CHECK(token_f1("something", one("")) == doctest::Approx(0.0));
}

TEST_CASE("token_f1 takes the best gold") {
    std::vector<std::string> golds = {"Lou Gehrig", "Babe Ruth"};
    CHECK(token_f1("Ruth", golds) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("token_f1 is symmetric and bounded") {
    std::mt19937 rng(99);
    std::vector<std::string> vocab = {"red", "green", "blue", "the", "a", "prize"};
    for (int trial = 0; trial < 50; ++trial) {
        auto sentence = [&] {
            int n = static_cast<int>(rng() % 5);
            std::string s;
            for (int i = 0; i < n; ++i) {
                if (i) s += ' ';
                s += vocab[rng() % vocab.size()];
            }
            return s;
        };
        std::string a = sentence(), b = sentence();
        double ab = token_f1(a, one(b));
        double ba = token_f1(b, one(a));
        CHECK(ab == doctest::Approx(ba));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("rouge_l basics") {
    CHECK(rouge_l("a b c d", one("a b c d")) == doctest::Approx(1.0));
    CHECK(rouge_l("a b c d", one("a c d")) == doctest::Approx(6.0 / 7.0));
    CHECK(rouge_l("The Cat", one("the cat")) == doctest::Approx(1.0));
    // punctuation is part of the token stream here
    CHECK(rouge_l("a .", one("a")) == doctest::Approx(2.0 / 3.0));
    CHECK(rouge_l("", one("a")) == doctest::Approx(0.0));
    CHECK(rouge_l("a", one("")) == doctest::Approx(0.0));
}

TEST_CASE("rouge_l keeps the best reference") {
    std::vector<std::string> refs = {"x y z", "a b c d"};
    CHECK(rouge_l("a b c d", refs) == doctest::Approx(1.0));
    CHECK(rouge_l("x q z", refs) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("rouge_l agrees with a reference LCS on random inputs") {
    std::mt19937 rng(20240817);
    std::vector<std::string> vocab = {"alpha", "beta", "gamma", "delta"};
    for (int trial = 0; trial < 40; ++trial) {
        auto sentence = [&] {
            int n = 1 + static_cast<int>(rng() % 7);
            std::string s;
            for (int i = 0; i < n; ++i) {
                if (i) s += ' ';
                s += vocab[rng() % vocab.size()];
            }
            return s;
        };
        std::string pred = sentence(), ref = sentence();
        auto pt = lowered_tokens(pred);
        auto rt = lowered_tokens(ref);
        int lcs = lcs_oracle(pt, rt);
        double expected = 0.0;
        if (lcs > 0) {
            double p = static_cast<double>(lcs) / pt.size();
            double r = static_cast<double>(lcs) / rt.size();
            expected = 2.0 * p * r / (p + r);
        }
        CHECK(rouge_l(pred, one(ref)) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("dr is the geometric mean") {
    CHECK(dr(31.1, 39.6) == doctest::Approx(35.1).epsilon(0.0015));
    CHECK(dr(32.4, 40.0) == doctest::Approx(36.0).epsilon(0.0015));
    CHECK(dr(33.7, 39.7) == doctest::Approx(36.6).epsilon(0.0015));
    CHECK(dr(4.0, 9.0) == doctest::Approx(6.0));
    CHECK(dr(9.0, 4.0) == doctest::Approx(dr(4.0, 9.0)));
    CHECK(dr(17.3, 17.3) == doctest::Approx(17.3));
    CHECK(dr(0.0, 55.0) == doctest::Approx(0.0));
}

TEST_CASE("the window extractor recovers a verbatim gold span") {
    WindowExtractor oracle;
    std::string extracted = extract_answer(testutil::kOlympicLongAnswer, testutil::kWinterDq,
                                           one("Norway"), oracle);
    CHECK(token_f1(extracted, one("Norway")) == doctest::Approx(1.0));
}

TEST_CASE("the window extractor prefers the earliest shortest best window") {
    WindowExtractor oracle;
    std::string extracted =
        extract_answer("blue red c red blue", "irrelevant?", one("red blue"), oracle);
    CHECK(extracted == "blue red");
}

TEST_CASE("the window extractor returns nothing without token overlap") {
    WindowExtractor oracle;
    CHECK(extract_answer("entirely unrelated text", "dq?", one("quantum"), oracle).empty());
    CHECK(extract_answer("", "dq?", one("quantum"), oracle).empty());
}

TEST_CASE("blind extraction leans on the question text") {
    WindowExtractor blind(WindowExtractor::Mode::blind);
    std::string long_answer = "In winter history the top country is Norway by medals.";
    std::string extracted =
        extract_answer(long_answer, "Which country is top in winter history?", {}, blind);
    CHECK(!extracted.empty());
    CHECK(whitespace_tokens(extracted).size() <= 6);
    // deterministic across calls
    CHECK(extracted ==
          extract_answer(long_answer, "Which country is top in winter history?", {}, blind));
}

TEST_CASE("disambig_f1 over the olympic example") {
    WindowExtractor oracle;
    auto ex = olympic_example();
    CHECK(disambig_f1(testutil::kOlympicLongAnswer, ex, oracle) == doctest::Approx(100.0));
    CHECK(disambig_f1("", ex, oracle) == doctest::Approx(0.0));
    // only the winter half is answerable from this text
    CHECK(disambig_f1("Norway tops the winter table.", ex, oracle) == doctest::Approx(50.0));
}

TEST_CASE("answer_f1 scales the best pair") {
    std::vector<std::string> preds = {"Berra", "Ruth"};
    std::vector<std::string> golds = {"Yogi Berra"};
    CHECK(answer_f1(preds, golds) == doctest::Approx(100.0 * 2.0 / 3.0));
    CHECK(answer_f1({}, golds) == doctest::Approx(0.0));
    CHECK(answer_f1(one("Yogi Berra"), golds) == doctest::Approx(100.0));
}

TEST_CASE("answer_coverage counts gold questions served by the top-k") {
    auto pool = testutil::olympic_pool();
    // order: distractor first, then the summer doc, then the winter doc
    std::vector<Passage> ranked;
    for (const auto& p : pool.passages)
        if (p.text.find("Stock") != std::string::npos) ranked.push_back(p);
    for (const auto& p : pool.passages)
        if (p.text.find("United States") != std::string::npos &&
            p.text.find("Norway") == std::string::npos)
            ranked.push_back(p);
    for (const auto& p : pool.passages)
        if (p.text.find("Norway") != std::string::npos) ranked.push_back(p);

    auto ex = olympic_example();
    std::vector<int> ks = {1, 2, 10};
    auto report = answer_coverage(ranked, ex, ks);
    CHECK(report.ac_at.at(1) == doctest::Approx(0.0));
    CHECK(report.ac_at.at(2) == doctest::Approx(50.0));
    CHECK(report.ac_at.at(10) == doctest::Approx(100.0));
}

TEST_CASE("answer_coverage is nondecreasing in k and matches a direct count") {
    std::mt19937 rng(4242);
    std::vector<std::string> vocab = {"oslo", "tokyo", "cairo", "lima", "quito"};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Passage> ranked;
        for (int i = 0; i < 12; ++i) {
            Passage p;
            p.id = "p" + std::to_string(i);
            p.title = "t";
            p.text = vocab[rng() % vocab.size()] + " " + vocab[rng() % vocab.size()];
            p.source = PassageSource::local_index;
            ranked.push_back(p);
        }
        EvalExample ex;
        ex.aq = "which city?";
        for (int d = 0; d < 3; ++d)
            ex.gold_disambiguations.push_back(
                {"dq " + std::to_string(d) + "?", {vocab[rng() % vocab.size()]}});
        ex.gold_long_answers = {"a", "b"};

        std::vector<int> ks = {1, 3, 5, 12, 50};
        auto report = answer_coverage(ranked, ex, ks);
        double prev = -1.0;
        for (int k : ks) {
            double got = report.ac_at.at(k);
            CHECK(got >= prev);
            prev = got;

            int covered = 0;
            for (const auto& gold : ex.gold_disambiguations) {
                bool hit = false;
                for (int i = 0; i < std::min<int>(k, static_cast<int>(ranked.size())); ++i)
                    for (const auto& a : gold.gold_answers)
                        if (contains_normalized(ranked[static_cast<std::size_t>(i)].text, a))
                            hit = true;
                if (hit) ++covered;
            }
            CHECK(got == doctest::Approx(100.0 * covered / 3.0));
        }
    }
}

TEST_CASE("eval examples validate with indexed context") {
    auto ex = olympic_example();
    CHECK_NOTHROW(ex.validate("dev[0]"));

    EvalExample no_aq = ex;
    no_aq.aq.clear();
    CHECK_THROWS_WITH_AS(no_aq.validate("dev[0]"), "dev[0]: aq must be non-empty",
                         DatasetError);

    EvalExample no_golds = ex;
    no_golds.gold_disambiguations.clear();
    CHECK_THROWS_WITH_AS(no_golds.validate("dev[1]"),
                         "dev[1]: gold_disambiguations must be non-empty", DatasetError);

    EvalExample blank_dq = ex;
    blank_dq.gold_disambiguations[1].dq.clear();
    CHECK_THROWS_WITH_AS(blank_dq.validate("dev[2]"),
                         "dev[2]: gold_disambiguations[1].dq must be non-empty",
                         DatasetError);

    EvalExample blank_answers = ex;
    blank_answers.gold_disambiguations[0].gold_answers.clear();
    CHECK_THROWS_WITH_AS(blank_answers.validate("dev[3]"),
                         "dev[3]: gold_disambiguations[0].answers must be non-empty",
                         DatasetError);

    EvalExample short_refs = ex;
    short_refs.gold_long_answers.pop_back();
    CHECK_THROWS_WITH_AS(short_refs.validate(),
                         "gold_long_answers must contain exactly 2 entries", DatasetError);
}
