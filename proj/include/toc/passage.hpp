#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace toc {

enum class PassageSource { local_index, web_search, fixture };

std::string to_string(PassageSource s);
PassageSource passage_source_from_string(const std::string& s);

struct Passage {
    std::string id;
    std::string title;
    std::string text;
    PassageSource source = PassageSource::local_index;
    std::optional<double> score; // attached once ranked
};

// "title | text", the string every scorer sees for a passage.
std::string passage_repr(const Passage& p);

struct PassagePool {
    std::vector<Passage> passages;
    std::string origin_query;

    bool empty() const { return passages.empty(); }
    std::size_t size() const { return passages.size(); }
};

inline constexpr int kDefaultPoolCap = 250;

// Union of a then b, duplicates removed by normalized-text equality
// (first occurrence wins), truncated to cap.
PassagePool combine_pools(std::span<const Passage> a, std::span<const Passage> b, int cap,
                          const std::string& origin_query = "");

} // namespace toc
