#include "toc/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "toc/errors.hpp"
#include "toc/text.hpp"

namespace toc {

namespace {

std::string padded_id(std::size_t n) {
    std::ostringstream os;
    os << "p";
    std::string digits = std::to_string(n);
    for (std::size_t i = digits.size(); i < 6; ++i) os << '0';
    os << digits;
    return os.str();
}

} // namespace

CorpusIndex CorpusIndex::build(std::span<const Document> documents, int max_passage_tokens) {
    if (documents.empty()) throw EmptyCorpus();
    if (max_passage_tokens < 1) max_passage_tokens = 1;

    CorpusIndex index;
    std::set<std::pair<std::string, std::string>> seen_docs;
    for (const auto& doc : documents) {
        if (!seen_docs.insert({doc.title, doc.text}).second) continue; // idempotent per (title, text)
        auto tokens = whitespace_tokens(doc.text);
        if (tokens.empty()) continue;
        for (std::size_t start = 0; start < tokens.size();
             start += static_cast<std::size_t>(max_passage_tokens)) {
            std::size_t end =
                std::min(tokens.size(), start + static_cast<std::size_t>(max_passage_tokens));
            std::string chunk;
            for (std::size_t i = start; i < end; ++i) {
                if (!chunk.empty()) chunk.push_back(' ');
                chunk += tokens[i];
            }
            Passage p;
            p.id = padded_id(index.passages_.size());
            p.title = doc.title;
            p.text = std::move(chunk);
            p.source = PassageSource::local_index;
            index.passages_.push_back(std::move(p));
        }
    }
    if (index.passages_.empty()) throw EmptyCorpus();
    index.index_passages();
    return index;
}

void CorpusIndex::index_passages() {
    term_freqs_.clear();
    lengths_.clear();
    doc_freq_.clear();
    long long total_len = 0;
    for (const auto& p : passages_) {
        std::unordered_map<std::string, int> freqs;
        auto tokens = normalize_tokens(p.text);
        for (const auto& t : tokens) freqs[t]++;
        for (const auto& [term, _] : freqs) doc_freq_[term]++;
        lengths_.push_back(static_cast<int>(tokens.size()));
        total_len += static_cast<long long>(tokens.size());
        term_freqs_.push_back(std::move(freqs));
    }
    avg_length_ = passages_.empty()
                      ? 0.0
                      : static_cast<double>(total_len) / static_cast<double>(passages_.size());
}

double CorpusIndex::idf(const std::string& term) const {
    auto it = doc_freq_.find(term);
    if (it == doc_freq_.end()) return 0.0;
    double n = static_cast<double>(doc_count());
    double df = static_cast<double>(it->second);
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

std::vector<Passage> CorpusIndex::search(const std::string& query, int k) const {
    auto terms = normalize_tokens(query);
    if (terms.empty()) throw EmptyQuery("local_search: query normalizes to zero terms");

    // distinct terms; repeated query terms do not double-count
    std::set<std::string> distinct(terms.begin(), terms.end());

    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < passages_.size(); ++i) {
        double score = 0.0;
        bool matched = false;
        for (const auto& term : distinct) {
            auto tf_it = term_freqs_[i].find(term);
            if (tf_it == term_freqs_[i].end()) continue;
            matched = true;
            double tf = static_cast<double>(tf_it->second);
            double len_norm = 1.0 - kB + kB * static_cast<double>(lengths_[i]) / avg_length_;
            score += idf(term) * tf * (kK1 + 1.0) / (tf + kK1 * len_norm);
        }
        if (matched) scored.emplace_back(score, i);
    }
    std::sort(scored.begin(), scored.end(), [this](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return passages_[a.second].id < passages_[b.second].id;
    });
    if (static_cast<int>(scored.size()) > k) scored.resize(static_cast<std::size_t>(k));

    std::vector<Passage> out;
    out.reserve(scored.size());
    for (const auto& [score, idx] : scored) {
        Passage p = passages_[idx];
        p.score = score;
        out.push_back(std::move(p));
    }
    return out;
}

void CorpusIndex::save(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["version"] = "toc-index-v1";
    j["passages"] = nlohmann::json::array();
    for (const auto& p : passages_) {
        j["passages"].push_back({{"id", p.id}, {"title", p.title}, {"text", p.text}});
    }
    std::ofstream out(std::filesystem::path(dir) / "index.json");
    if (!out) throw Error("cannot write index to " + dir);
    out << j.dump(2) << "\n";
}

CorpusIndex CorpusIndex::load(const std::string& dir) {
    std::ifstream in(std::filesystem::path(dir) / "index.json");
    if (!in) throw Error("cannot read index from " + dir);
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("version", "") != "toc-index-v1")
        throw Error("unsupported index version in " + dir);
    CorpusIndex index;
    for (const auto& pj : j.at("passages")) {
        Passage p;
        p.id = pj.at("id").get<std::string>();
        p.title = pj.at("title").get<std::string>();
        p.text = pj.at("text").get<std::string>();
        p.source = PassageSource::local_index;
        index.passages_.push_back(std::move(p));
    }
    if (index.passages_.empty()) throw EmptyCorpus();
    index.index_passages();
    return index;
}

std::vector<Document> read_jsonl_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedRecord("cannot open corpus file: " + path);
    std::vector<Document> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("title") || !j.contains("text") ||
            !j["title"].is_string() || !j["text"].is_string()) {
            throw MalformedRecord("corpus line " + std::to_string(lineno) +
                                  ": expected object with string fields \"title\" and \"text\"");
        }
        docs.push_back({j["title"].get<std::string>(), j["text"].get<std::string>()});
    }
    return docs;
}

CorpusIndex ingest_corpus(std::span<const Document> documents, int max_passage_tokens) {
    return CorpusIndex::build(documents, max_passage_tokens);
}

std::vector<Passage> local_search(const CorpusIndex& index, const std::string& query, int k) {
    return index.search(query, k);
}

} // namespace toc
