#include <doctest.h>

#include "toc/passage.hpp"
#include "toc/text.hpp"

#include <set>
#include <stdexcept>

using namespace toc;

namespace {

Passage make(const std::string& id, const std::string& text,
             PassageSource source = PassageSource::local_index) {
    Passage p;
    p.id = id;
    p.title = "t-" + id;
    p.text = text;
    p.source = source;
    return p;
}

} // namespace

TEST_CASE("passage source names round-trip") {
    for (auto s :
         {PassageSource::local_index, PassageSource::web_search, PassageSource::fixture})
        CHECK(passage_source_from_string(to_string(s)) == s);
    CHECK(to_string(PassageSource::local_index) == "local-index");
    CHECK(to_string(PassageSource::web_search) == "web-search");
    CHECK(to_string(PassageSource::fixture) == "fixture");
    CHECK_THROWS_AS(passage_source_from_string("bing"), std::invalid_argument);
}

TEST_CASE("passage_repr joins title and text") {
    Passage p = make("p1", "some text");
    CHECK(passage_repr(p) == "t-p1 | some text");
}

TEST_CASE("combine_pools removes duplicates by normalized text, first wins") {
    auto p1 = make("p1", "alpha beta");
    auto p2 = make("p2", "Gamma, delta");
    auto p2_dup = make("w1", "gamma delta!", PassageSource::web_search);
    auto p3 = make("w2", "epsilon", PassageSource::web_search);
    std::vector<Passage> a{p1, p2};
    std::vector<Passage> b{p2_dup, p3};

    PassagePool pool = combine_pools(a, b, 250, "q");
    REQUIRE(pool.size() == 3);
    CHECK(pool.passages[0].id == "p1");
    CHECK(pool.passages[1].id == "p2");
    CHECK(pool.passages[2].id == "w2");
    CHECK(pool.origin_query == "q");
}

TEST_CASE("combine_pools caps the union and keeps all local passages first") {
    std::vector<Passage> local;
    for (int i = 0; i < 150; ++i)
        local.push_back(make("p" + std::to_string(i), "local text " + std::to_string(i)));
    std::vector<Passage> web;
    for (int i = 0; i < 100; ++i)
        web.push_back(
            make("w" + std::to_string(i), "web text " + std::to_string(i),
                 PassageSource::web_search));

    PassagePool pool = combine_pools(local, web, 250, "q");
    CHECK(pool.size() <= 250);
    CHECK(pool.size() >= 150);
    // a-then-b order: every local passage precedes every web passage
    for (std::size_t i = 0; i < 150; ++i)
        CHECK(pool.passages[i].source == PassageSource::local_index);
}

TEST_CASE("combine_pools of two empty lists is empty") {
    PassagePool pool = combine_pools({}, {}, 10, "");
    CHECK(pool.empty());
    CHECK(pool.size() == 0);
}

TEST_CASE("combine_pools never emits equal normalized texts and honors the cap") {
    // overlapping ranges plus case/punctuation variants of the same text
    std::vector<Passage> a;
    std::vector<Passage> b;
    for (int i = 0; i < 40; ++i)
        a.push_back(make("a" + std::to_string(i), "item number " + std::to_string(i % 25)));
    for (int i = 0; i < 40; ++i)
        b.push_back(
            make("b" + std::to_string(i), "Item NUMBER " + std::to_string(i % 30) + "!",
                 PassageSource::web_search));

    for (int cap : {1, 5, 25, 30, 100}) {
        PassagePool pool = combine_pools(a, b, cap, "q");
        CHECK(static_cast<int>(pool.size()) <= cap);
        std::set<std::string> seen;
        for (const auto& p : pool.passages)
            CHECK(seen.insert(normalize_text(p.text)).second);
    }
    // with a generous cap the distinct texts all survive exactly once
    PassagePool pool = combine_pools(a, b, 100, "q");
    CHECK(pool.size() == 30);
}
