#include "toc/passage.hpp"

#include <stdexcept>
#include <unordered_set>

#include "toc/text.hpp"

namespace toc {

std::string to_string(PassageSource s) {
    switch (s) {
    case PassageSource::local_index: return "local-index";
    case PassageSource::web_search: return "web-search";
    case PassageSource::fixture: return "fixture";
    }
    return "local-index";
}

PassageSource passage_source_from_string(const std::string& s) {
    if (s == "local-index") return PassageSource::local_index;
    if (s == "web-search") return PassageSource::web_search;
    if (s == "fixture") return PassageSource::fixture;
    throw std::invalid_argument("unknown passage source: " + s);
}

std::string passage_repr(const Passage& p) {
    return p.title + " | " + p.text;
}

PassagePool combine_pools(std::span<const Passage> a, std::span<const Passage> b, int cap,
                          const std::string& origin_query) {
    PassagePool pool;
    pool.origin_query = origin_query;
    std::unordered_set<std::string> seen;
    auto take = [&](std::span<const Passage> src) {
        for (const auto& p : src) {
            if (static_cast<int>(pool.passages.size()) >= cap) return;
            if (seen.insert(normalize_text(p.text)).second) pool.passages.push_back(p);
        }
    };
    take(a);
    take(b);
    return pool;
}

} // namespace toc
