#pragma once

// Shared scaffolding for the test suite: a scratch directory, the olympic
// medals scenario driving the end-to-end cases, a rule-driven completion
// backend, and an in-process HTTP server.

#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <httplib.h>

#include "toc/corpus.hpp"
#include "toc/exemplar.hpp"
#include "toc/llm.hpp"
#include "toc/passage.hpp"

namespace testutil {

class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / ("toc-test-" + std::to_string(rd()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec) && !ec) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create scratch directory");
    }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }
    std::string sub(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline const std::string kOlympicAq = "what country has the most medals in olympic history?";
inline const std::string kGoldDq = "Which country has the most gold medals in Olympic history?";
inline const std::string kWinterDq =
    "Which country has the most gold medals in Winter Olympic history?";

inline const std::string kOlympicLongAnswer =
    "This question is ambiguous in terms of which medal count is being asked about. "
    "The United States has won the most gold medals in the history of the Summer Olympic "
    "Games. Norway has won the most gold medals in the Winter Olympic Games.";

inline std::vector<toc::Document> olympic_docs() {
    return {
        {"Olympic medal leaders",
         "The United States has won the most gold medals and the most overall medals in "
         "the history of the Summer Olympic Games with well over one thousand golds."},
        {"Winter Olympic medal leaders",
         "Norway has won the most gold medals in the history of the Winter Olympic Games "
         "ahead of the United States and Germany."},
        {"Olympic Games",
         "The modern Olympic Games are held every four years with summer and winter "
         "editions alternating every two years."},
        {"Stock market indices",
         "Stock prices and market indices track the value of companies listed on public "
         "exchanges around the world."},
    };
}

inline toc::CorpusIndex olympic_index() {
    auto docs = olympic_docs();
    return toc::CorpusIndex::build(docs);
}

inline toc::PassagePool olympic_pool() {
    toc::PassagePool pool;
    pool.origin_query = kOlympicAq;
    pool.passages = olympic_index().passages();
    return pool;
}

inline std::vector<toc::Exemplar> exemplar_store(std::size_t n = 1) {
    std::vector<toc::Exemplar> store;
    const char* questions[] = {
        "who played the weasley brothers in harry potter?",
        "when did the world cup start?",
        "what is the tallest building in the world?",
        "who wrote the origin of species?",
        "where was the first modern olympics held?",
        "what team won the first super bowl?",
    };
    for (std::size_t i = 0; i < n; ++i) {
        toc::Exemplar ex;
        ex.question = questions[i % 6] + std::string(i >= 6 ? " v" + std::to_string(i) : "");
        ex.disambiguations.push_back(
            {"Variant " + std::to_string(i) + " of the question?", {"answer " + std::to_string(i)}});
        ex.long_answer = "A detailed answer for example " + std::to_string(i) +
                         " that spells out each interpretation in full sentences.";
        store.push_back(std::move(ex));
    }
    return store;
}

inline bool ends_with(std::string_view text, std::string_view suffix) {
    return text.size() >= suffix.size() &&
           text.substr(text.size() - suffix.size()) == suffix;
}

// Answers by inspecting which prompt family it received. Verification
// prompts naming United States or Norway pass; the olympic AQ clarifies
// into the gold-medal and winter interpretations; every other question
// yields prose that parses to nothing. The prompt log lets tests count
// and inspect calls.
class RuleBackend : public toc::CompletionBackend {
public:
    std::vector<std::string> prompts;

    toc::CompletionResponse complete(const toc::CompletionRequest& request) override {
        prompts.push_back(request.prompt);
        const std::string& p = request.prompt;
        if (p.find("Proposed Answer:") != std::string::npos) {
            bool good = p.find("Proposed Answer: United States") != std::string::npos ||
                        p.find("Proposed Answer: Norway") != std::string::npos;
            return respond(good ? "True" : "False", request);
        }
        if (ends_with(p, "Answer:")) return respond(kOlympicLongAnswer, request);
        if (ends_with(p, "Question: " + kOlympicAq)) {
            return respond("Disambiguations:\nDQ 1: " + kGoldDq +
                               "\nDA 1: United States\nDQ 2: " + kWinterDq + "\nDA 2: Norway",
                           request);
        }
        return respond("The question admits no further clarification.", request);
    }

private:
    static toc::CompletionResponse respond(std::string text,
                                           const toc::CompletionRequest& request) {
        toc::CompletionResponse resp;
        resp.text = std::move(text);
        resp.usage.prompt_tokens = static_cast<int>(request.prompt.size() / 5);
        resp.usage.completion_tokens = 1;
        return resp;
    }
};

// httplib server on a loopback port, torn down with the scope.
class ScopedServer {
public:
    ScopedServer() = default;
    ScopedServer(const ScopedServer&) = delete;
    ScopedServer& operator=(const ScopedServer&) = delete;

    httplib::Server& server() { return svr_; }

    void start() {
        port_ = svr_.bind_to_any_port("127.0.0.1");
        if (port_ <= 0) throw std::runtime_error("cannot bind test server");
        thread_ = std::thread([this] { svr_.listen_after_bind(); });
        svr_.wait_until_ready();
    }

    int port() const { return port_; }
    std::string url(const std::string& path = "") const {
        return "http://127.0.0.1:" + std::to_string(port_) + path;
    }

    ~ScopedServer() {
        svr_.stop();
        if (thread_.joinable()) thread_.join();
    }

private:
    httplib::Server svr_;
    int port_ = 0;
    std::thread thread_;
};

} // namespace testutil
