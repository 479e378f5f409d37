#pragma once

#include <string>
#include <vector>

#include "toc/passage.hpp"

namespace toc {

// External web-search endpoint. GET with query parameters q and count;
// JSON reply {"results":[{"title","snippet"},...]}. Results with empty
// snippets are dropped. Transport failures raise RetrievalUnavailable so
// the pipeline can degrade to local-only retrieval.
class WebSearchClient {
public:
    virtual ~WebSearchClient() = default;
    virtual std::vector<Passage> search(const std::string& query, int k) = 0;
};

class HttpWebSearch : public WebSearchClient {
public:
    explicit HttpWebSearch(std::string endpoint) : endpoint_(std::move(endpoint)) {}
    std::vector<Passage> search(const std::string& query, int k) override;

private:
    std::string endpoint_;
};

// Replays the wire shape from a fixture directory keyed by a hash of the
// query: <dir>/<hash_hex(q)>.json.
class FixtureWebSearch : public WebSearchClient {
public:
    explicit FixtureWebSearch(std::string dir) : dir_(std::move(dir)) {}
    std::vector<Passage> search(const std::string& query, int k) override;

    // Writes a canned response for query into the fixture directory.
    static void write_fixture(const std::string& dir, const std::string& query,
                              const std::vector<std::pair<std::string, std::string>>& results);

private:
    std::string dir_;
};

std::vector<Passage> web_search(WebSearchClient& client, const std::string& query, int k);

} // namespace toc
