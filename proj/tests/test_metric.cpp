#include "lexichron/metric.hpp"

#include "lexichron/error.hpp"
#include "lexichron/rng.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace lexichron;

namespace {

WordForm form(const std::string& raw, std::optional<std::string> cls = {}) {
    return WordForm::from_raw(raw, std::move(cls));
}

LexicalDatabase two_language_db(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
    LexicalDatabase db;
    db.add_language({"A", LanguageRole::Modern, {}});
    db.add_language({"B", LanguageRole::Modern, {}});
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i)
        db.add_item({"w" + std::to_string(i), "g"});
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].empty())
            db.add_form(0, i, form(a[i]));
    for (std::size_t i = 0; i < b.size(); ++i)
        if (!b[i].empty())
            db.add_form(1, i, form(b[i]));
    return db;
}

std::u32string random_word(SplitMix64& rng, std::size_t max_len) {
    std::size_t len = rng.next_below(max_len + 1);
    std::u32string s;
    for (std::size_t i = 0; i < len; ++i)
        s.push_back(U'a' + static_cast<char32_t>(rng.next_below(3)));
    return s;
}

} // namespace

TEST_CASE("levenshtein basics") {
    CHECK(levenshtein(U"", U"abc") == 3);
    CHECK(levenshtein(U"casa", U"casa") == 0);
    CHECK(oracle::levenshtein(U"kitten", U"sitting") == 3);
    CHECK(levenshtein(U"kitten", U"sitting") == 3);
    CHECK(levenshtein(U"", U"") == 0);
}

TEST_CASE("levenshtein equals the recursive oracle exhaustively") {
    auto strings = oracle::all_strings(3, 4);
    REQUIRE(strings.size() == 121); // 1 + 3 + 9 + 27 + 81
    for (const auto& a : strings)
        for (const auto& b : strings)
            CHECK(levenshtein(a, b) == oracle::levenshtein(a, b));
}

TEST_CASE("levenshtein is a metric") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        auto a = random_word(rng, 6);
        auto b = random_word(rng, 6);
        auto c = random_word(rng, 6);
        std::size_t ab = levenshtein(a, b);
        CHECK(ab == levenshtein(b, a));
        CHECK((ab == 0) == (a == b));
        CHECK(ab <= levenshtein(a, c) + levenshtein(c, b));
    }
}

TEST_CASE("nld examples") {
    CHECK(nld(U"abc", U"abd") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(oracle::levenshtein(U"abc", U"abd") == 1);
    CHECK(nld(U"x", U"x") == 0.0);
    CHECK(nld(U"ab", U"cd") == 1.0);
    CHECK_THROWS_AS(nld(U"", U""), Error);
}

TEST_CASE("nld stays in [0,1] and vanishes only on equality") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        auto a = random_word(rng, 6);
        auto b = random_word(rng, 6);
        if (a.empty() && b.empty())
            continue;
        double d = nld(a, b);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
        CHECK((d == 0.0) == (a == b));
    }
}

TEST_CASE("word_similarity in NLD mode") {
    std::vector<WordForm> cane{form("cane")};
    CHECK(word_similarity(cane, {form("cane")}, {}) == 1.0);

    // max rule over synonyms: D(cane,chien)=3/5 -> 0.4; D(cane,can)=1/4 -> 0.75
    CHECK(oracle::levenshtein(U"cane", U"chien") == 3);
    CHECK(oracle::levenshtein(U"cane", U"can") == 1);
    std::vector<WordForm> fr{form("chien"), form("can")};
    CHECK(word_similarity(cane, fr, {}) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("word_similarity in binary mode") {
    SimilarityScorer binary{ScorerMode::BinaryCognacy};
    std::vector<WordForm> a{form("cane", "A")};
    std::vector<WordForm> b{form("hund", "B")};
    std::vector<WordForm> b2{form("hund", "B"), form("chien", "A")};
    CHECK(word_similarity(a, b, binary) == 0.0);
    CHECK(word_similarity(a, b2, binary) == 1.0);

    std::vector<WordForm> untagged{form("cane")};
    CHECK_THROWS_AS(word_similarity(a, untagged, binary), Error);
}

TEST_CASE("word_similarity requires non-empty slots") {
    std::vector<WordForm> a{form("cane")};
    std::vector<WordForm> empty;
    CHECK_THROWS_AS(word_similarity(a, empty, {}), Error);
}

TEST_CASE("word_similarity never decreases when a synonym is added") {
    SplitMix64 rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        auto mk = [&]() {
            std::u32string w = random_word(rng, 5);
            if (w.empty())
                w = U"a";
            WordForm f;
            f.normalized = w;
            f.raw = "x";
            return f;
        };
        std::vector<WordForm> a{mk()}, b{mk()};
        double before = word_similarity(a, b, {});
        a.push_back(mk());
        double after = word_similarity(a, b, {});
        CHECK(after >= before);
    }
}

TEST_CASE("language_overlap fixtures") {
    SUBCASE("identical forms give (1, M)") {
        auto db = two_language_db({"casa", "fuoco", "sole"}, {"casa", "fuoco", "sole"});
        auto p = language_overlap(db, 0, 1, {});
        CHECK(p.overlap == 1.0);
        CHECK(p.support == 3);
    }
    SUBCASE("fully disjoint forms give (0, M)") {
        auto db = two_language_db({"ab", "cd"}, {"cd", "ab"});
        auto p = language_overlap(db, 0, 1, {});
        CHECK(p.overlap == 0.0);
        CHECK(p.support == 2);
    }
    SUBCASE("mean of {1, 0, 0.5} is (0.5, 3)") {
        auto db = two_language_db({"casa", "ab", "ab"}, {"casa", "cd", "ax"});
        auto p = language_overlap(db, 0, 1, {});
        CHECK(p.overlap == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(p.support == 3);
    }
    SUBCASE("missing slots shrink the support") {
        auto db = two_language_db({"casa", "", "sole"}, {"casa", "fuoco", "sole"});
        auto p = language_overlap(db, 0, 1, {});
        CHECK(p.support == 2);
        CHECK(p.overlap == 1.0);
    }
    SUBCASE("no comparable items raises") {
        auto db = two_language_db({"casa", ""}, {"", "fuoco"});
        CHECK_THROWS_AS(language_overlap(db, 0, 1, {}), Error);
    }
}

TEST_CASE("overlap_matrix fixtures and properties") {
    LexicalDatabase db;
    db.add_language({"A", LanguageRole::Modern, {}});
    db.add_language({"B", LanguageRole::Modern, {}});
    db.add_language({"C", LanguageRole::Modern, {}});
    for (int i = 0; i < 4; ++i)
        db.add_item({"w" + std::to_string(i), "g"});
    // All pairwise similarities are dyadic rationals, so the per-pair
    // sums are exact and order free; the bitwise invariance checks below
    // then hold with plain equality.
    const char* words[3][4] = {{"casa", "abcd", "abab", "aabb"},
                               {"casa", "wxyz", "abax", "aabx"},
                               {"masa", "abcd", "xyxy", "aabb"}};
    for (std::size_t l = 0; l < 3; ++l)
        for (std::size_t i = 0; i < 4; ++i)
            db.add_form(l, i, form(words[l][i]));

    auto m = overlap_matrix(db, {});

    SUBCASE("matches independent per-pair calls") {
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                auto p = language_overlap(db, i, j, {});
                CHECK(m.value(i, j) == p.overlap);
                CHECK(m.support(i, j) == p.support);
            }
        }
    }
    SUBCASE("symmetry and unit diagonal") {
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(m.value(i, i) == 1.0);
            for (std::size_t j = 0; j < 3; ++j)
                CHECK(m.value(i, j) == m.value(j, i));
        }
    }
    SUBCASE("identical for every thread count") {
        auto m4 = overlap_matrix(db, {}, 4);
        CHECK(m4.values() == m.values());
        CHECK(m4.supports() == m.supports());
    }
    SUBCASE("invariant under item permutation and synonym order") {
        LexicalDatabase shuffled;
        shuffled.add_language({"A", LanguageRole::Modern, {}});
        shuffled.add_language({"B", LanguageRole::Modern, {}});
        shuffled.add_language({"C", LanguageRole::Modern, {}});
        std::vector<std::size_t> perm{2, 0, 3, 1};
        for (std::size_t k : perm)
            shuffled.add_item({"w" + std::to_string(k), "g"});
        for (std::size_t l = 0; l < 3; ++l)
            for (std::size_t k = 0; k < 4; ++k)
                shuffled.add_form(l, k, form(words[l][perm[k]]));
        auto ms = overlap_matrix(shuffled, {});
        CHECK(ms.values() == m.values());
    }
}

TEST_CASE("overlap_matrix of duplicated language is all ones") {
    auto db = two_language_db({"casa", "fuoco"}, {"casa", "fuoco"});
    auto m = overlap_matrix(db, {});
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(m.value(i, j) == 1.0);
}

TEST_CASE("overlap_matrix records incomparable pairs as undefined") {
    auto db = two_language_db({"casa", ""}, {"", "fuoco"});
    auto m = overlap_matrix(db, {});
    CHECK_FALSE(m.defined(0, 1));
    CHECK(m.support(0, 1) == 0);
    CHECK(m.defined(0, 0));

    auto csv = overlap_values_csv(m);
    CHECK(csv.find("NA") != std::string::npos);
    CHECK(csv.rfind("# schema:", 0) == 0);
}
