#include "toc/web_search.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "toc/errors.hpp"
#include "toc/http_util.hpp"
#include "toc/text.hpp"

namespace toc {

namespace {

std::vector<Passage> parse_results(const nlohmann::json& j, int k, PassageSource source) {
    if (!j.is_object() || !j.contains("results") || !j["results"].is_array())
        throw RetrievalUnavailable("web search reply has no \"results\" array");
    std::vector<Passage> out;
    std::size_t n = 0;
    for (const auto& r : j["results"]) {
        if (static_cast<int>(out.size()) >= k) break;
        std::string title = r.value("title", "");
        std::string snippet = r.value("snippet", "");
        if (snippet.empty()) continue; // dropped, not errored
        Passage p;
        std::ostringstream id;
        id << "web-";
        std::string digits = std::to_string(n);
        for (std::size_t i = digits.size(); i < 4; ++i) id << '0';
        id << digits;
        p.id = id.str();
        p.title = std::move(title);
        p.text = std::move(snippet);
        p.source = source;
        out.push_back(std::move(p));
        ++n;
    }
    return out;
}

} // namespace

std::vector<Passage> HttpWebSearch::search(const std::string& query, int k) {
    auto [client, path] = make_http_client(endpoint_);
    std::string sep = path.find('?') == std::string::npos ? "?" : "&";
    std::string url =
        path + sep + "q=" + url_encode(query) + "&count=" + std::to_string(k);
    auto res = client->Get(url);
    if (!res) throw RetrievalUnavailable("web search endpoint unreachable: " + endpoint_);
    if (res->status < 200 || res->status >= 300)
        throw RetrievalUnavailable("web search returned status " + std::to_string(res->status),
                                   res->status);
    nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded()) throw RetrievalUnavailable("web search reply is not JSON");
    return parse_results(j, k, PassageSource::web_search);
}

std::vector<Passage> FixtureWebSearch::search(const std::string& query, int k) {
    auto path = std::filesystem::path(dir_) / (hash_hex(query) + ".json");
    std::ifstream in(path);
    if (!in)
        throw RetrievalUnavailable("no web search fixture for query hash " + hash_hex(query));
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw RetrievalUnavailable("web search fixture is not JSON");
    return parse_results(j, k, PassageSource::web_search);
}

void FixtureWebSearch::write_fixture(
    const std::string& dir, const std::string& query,
    const std::vector<std::pair<std::string, std::string>>& results) {
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["q"] = query;
    j["results"] = nlohmann::json::array();
    for (const auto& [title, snippet] : results)
        j["results"].push_back({{"title", title}, {"snippet", snippet}});
    std::ofstream out(std::filesystem::path(dir) / (hash_hex(query) + ".json"));
    if (!out) throw FixtureStoreError("cannot write web search fixture in " + dir);
    out << j.dump(2) << "\n";
}

std::vector<Passage> web_search(WebSearchClient& client, const std::string& query, int k) {
    return client.search(query, k);
}

} // namespace toc
