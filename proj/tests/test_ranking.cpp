#include "lexichron/ranking.hpp"

#include "lexichron/error.hpp"
#include "lexichron/rng.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <numeric>

using namespace lexichron;

namespace {

StabilityTable table_of(std::vector<std::pair<std::string, double>> entries) {
    StabilityTable t;
    t.kind = StabilityKind::Estimated;
    for (auto& [id, v] : entries) {
        t.item_ids.push_back(id);
        t.glosses.push_back("");
        t.values.push_back(v);
    }
    return t;
}

RankedList list_of(std::vector<std::string> ids) {
    RankedList l;
    l.item_ids = std::move(ids);
    l.values.resize(l.item_ids.size());
    std::iota(l.values.rbegin(), l.values.rend(), 0.0); // any decreasing values
    return l;
}

} // namespace

TEST_CASE("rank_items") {
    SUBCASE("sorts by decreasing value") {
        auto list = rank_items(table_of({{"a", 0.9}, {"b", 0.5}, {"c", 0.7}}));
        CHECK(list.item_ids == std::vector<std::string>{"a", "c", "b"});
    }
    SUBCASE("ties break by ascending item_id") {
        auto list = rank_items(table_of({{"b", 0.5}, {"a", 0.5}}));
        CHECK(list.item_ids == std::vector<std::string>{"a", "b"});
    }
    SUBCASE("already sorted input is unchanged") {
        auto list = rank_items(table_of({{"a", 0.9}, {"b", 0.8}, {"c", 0.1}}));
        CHECK(list.item_ids == std::vector<std::string>{"a", "b", "c"});
    }
    SUBCASE("empty table raises") {
        CHECK_THROWS_AS(rank_items(table_of({})), Error);
    }
    SUBCASE("undefined entries must be dropped by the caller") {
        auto t = table_of({{"a", 0.9}});
        t.item_ids.push_back("b");
        t.glosses.push_back("");
        t.values.push_back(std::nullopt);
        CHECK_THROWS_AS(rank_items(t), Error);
    }
    SUBCASE("invariant under strictly monotone transforms") {
        auto t = table_of({{"a", 0.9}, {"b", 0.2}, {"c", 0.7}, {"d", 0.4}});
        auto base = rank_items(t);
        StabilityTable squared = t;
        for (auto& v : squared.values)
            v = (*v) * (*v);
        CHECK(rank_items(squared).item_ids == base.item_ids);
    }
}

TEST_CASE("common_count_curve exact cases") {
    const std::size_t m = 11;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < m; ++i)
        ids.push_back("w" + std::to_string(i));

    SUBCASE("identical rankings give c(m) = m") {
        auto curve = common_count_curve(list_of(ids), list_of(ids));
        for (std::size_t k = 0; k < m; ++k)
            CHECK(curve.common[k] == k + 1);
    }
    SUBCASE("reversed ranking gives c(m) = max(0, 2m - M)") {
        auto rev = ids;
        std::reverse(rev.begin(), rev.end());
        auto curve = common_count_curve(list_of(ids), list_of(rev));
        for (std::size_t k = 0; k < m; ++k) {
            std::size_t mm = k + 1;
            std::size_t expected = 2 * mm > m ? 2 * mm - m : 0;
            CHECK(curve.common[k] == expected);
        }
        CHECK(curve.common[m - 1] == m);
    }
    SUBCASE("baselines") {
        auto curve = common_count_curve(list_of(ids), list_of(ids));
        CHECK(curve.baseline_identity[4] == 5);
        CHECK(curve.baseline_random[4] == doctest::Approx(25.0 / 11.0));
    }
    SUBCASE("different item sets raise") {
        auto other = ids;
        other[0] = "zzz";
        CHECK_THROWS_AS(common_count_curve(list_of(ids), list_of(other)), Error);
    }
}

TEST_CASE("common_count_curve matches the brute-force oracle") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t m = 2 + rng.next_below(25);
        std::vector<std::size_t> pa(m), pb(m);
        std::iota(pa.begin(), pa.end(), 0);
        std::iota(pb.begin(), pb.end(), 0);
        for (std::size_t i = m; i > 1; --i)
            std::swap(pa[i - 1], pa[rng.next_below(i)]);
        for (std::size_t i = m; i > 1; --i)
            std::swap(pb[i - 1], pb[rng.next_below(i)]);

        auto to_list = [](const std::vector<std::size_t>& perm) {
            RankedList l;
            for (std::size_t v : perm)
                l.item_ids.push_back("w" + std::to_string(v));
            l.values.resize(perm.size());
            std::iota(l.values.rbegin(), l.values.rend(), 0.0);
            return l;
        };
        auto a = to_list(pa);
        auto b = to_list(pb);
        auto curve = common_count_curve(a, b);
        auto sym = common_count_curve(b, a);
        std::size_t prev = 0;
        for (std::size_t k = 0; k < m; ++k) {
            CHECK(curve.common[k] == oracle::prefix_intersection(pa, pb, k + 1));
            CHECK(curve.common[k] == sym.common[k]); // symmetry
            CHECK(curve.common[k] <= k + 1);
            std::size_t step = curve.common[k] - prev;
            CHECK(step <= 2); // increments in {0, 1, 2}
            prev = curve.common[k];
        }
        CHECK(curve.common[m - 1] == m);
    }
}

TEST_CASE("random_baseline_band") {
    SUBCASE("M=1 is deterministic") {
        auto band = random_baseline_band(1, 100, 12345);
        CHECK(band.mean[0] == 1.0);
        CHECK(band.sd[0] == 0.0);
        CHECK(band.self_check_ok);
    }
    SUBCASE("same seed reproduces the band") {
        auto a = random_baseline_band(20, 500, 7);
        auto b = random_baseline_band(20, 500, 7);
        CHECK(a.mean == b.mean);
        CHECK(a.sd == b.sd);
    }
    SUBCASE("identical for every thread count") {
        auto a = random_baseline_band(20, 500, 7, 1);
        auto b = random_baseline_band(20, 500, 7, 4);
        CHECK(a.mean == b.mean);
        CHECK(a.sd == b.sd);
    }
    SUBCASE("mean c(5) near 2.5 at M=10") {
        auto band = random_baseline_band(10, 100000, 2024);
        CHECK(band.mean[4] == doctest::Approx(2.5).epsilon(0.008)); // 2.5 +- 0.02
        CHECK(band.self_check_ok);
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(random_baseline_band(0, 10, 1), Error);
        CHECK_THROWS_AS(random_baseline_band(10, 0, 1), Error);
    }
}

namespace {

LexicalDatabase family_db(const std::vector<std::vector<std::string>>& langs,
                          const std::string& prefix) {
    LexicalDatabase db;
    for (std::size_t l = 0; l < langs.size(); ++l)
        db.add_language({prefix + std::to_string(l), LanguageRole::Modern, {}});
    for (std::size_t i = 0; i < langs[0].size(); ++i)
        db.add_item({"w" + std::to_string(i), "g"});
    for (std::size_t l = 0; l < langs.size(); ++l)
        for (std::size_t i = 0; i < langs[l].size(); ++i)
            db.add_form(l, i, WordForm::from_raw(langs[l][i]));
    return db;
}

} // namespace

TEST_CASE("compare_families") {
    auto a = family_db({{"casa", "fuoco", "sole"},
                        {"casa", "feu", "sol"},
                        {"maison", "fuoco", "soleil"}},
                       "a");

    SUBCASE("self comparison gives the identity curve") {
        auto curve = compare_families(a, a, {});
        for (std::size_t k = 0; k < curve.item_count; ++k)
            CHECK(curve.common[k] == k + 1);
    }
    SUBCASE("insufficient languages raise") {
        auto tiny = family_db({{"casa"}, {"casa"}}, "t");
        CHECK_THROWS_AS(compare_families(a, tiny, {}), Error);
    }
    SUBCASE("insufficient common items raise") {
        auto other = family_db({{"casa"}, {"cosa"}, {"case"}}, "b");
        // `other` has only item w0; one common item is not enough
        CHECK_THROWS_AS(compare_families(a, other, {}), Error);
    }
}

TEST_CASE("curve and ranking CSV emission") {
    auto list = rank_items(table_of({{"a", 0.9}, {"b", 0.5}}));
    auto csv = ranking_csv(list);
    CHECK(csv.rfind("# schema:", 0) == 0);
    CHECK(csv.find("1,a,0.9") != std::string::npos);

    auto curve = common_count_curve(list_of({"a", "b"}), list_of({"a", "b"}));
    auto ccsv = curve_csv(curve);
    CHECK(ccsv.find("m,c,baseline_random,baseline_identity,band_mean,band_sd") !=
          std::string::npos);
    CHECK(ccsv.find("NA,NA") != std::string::npos); // no band computed

    curve.band = random_baseline_band(2, 10, 1);
    auto with_band = curve_csv(curve);
    CHECK(with_band.find("NA,NA") == std::string::npos);
}
