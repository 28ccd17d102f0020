#include "lexichron/simgen.hpp"

#include "lexichron/error.hpp"
#include "lexichron/metric.hpp"
#include "lexichron/stability.hpp"

#include "doctest.h"

#include <cmath>
#include <sstream>

using namespace lexichron;

TEST_CASE("family tree construction") {
    SUBCASE("star") {
        auto tree = FamilyTree::star(5, 1.5);
        tree.validate();
        CHECK(tree.size() == 6);
        auto leaves = tree.leaves();
        CHECK(leaves.size() == 5);
        for (auto leaf : leaves)
            CHECK(tree.depth(leaf) == 1.5);
        CHECK(tree.path_length(leaves[0], leaves[1]) == 3.0);
    }
    SUBCASE("two clades") {
        auto tree = FamilyTree::two_clades(3, 0.5, 1.5, "east", "west");
        tree.validate();
        auto leaves = tree.leaves();
        REQUIRE(leaves.size() == 6);
        // within a clade: 2 * (1.5 - 0.5); across: 2 * 1.5
        CHECK(tree.path_length(leaves[0], leaves[1]) == doctest::Approx(2.0));
        CHECK(tree.path_length(leaves[0], leaves[3]) == doctest::Approx(3.0));
        CHECK(tree.node(leaves[0]).tags.count("east") == 1);
        CHECK(tree.node(leaves[3]).tags.count("west") == 1);
    }
    SUBCASE("validation catches broken shapes") {
        FamilyTree tree;
        CHECK_THROWS_AS(tree.validate(), Error);
        tree.add_root("r");
        CHECK_THROWS_AS(tree.add_root("again"), Error);
        CHECK_THROWS_AS(tree.add_child(5, "x", 1.0), Error);
        CHECK_THROWS_AS(tree.add_child(0, "x", -1.0), Error);
    }
}

TEST_CASE("random_proto") {
    SimConfig config;
    config.item_count = 110;
    config.seed = 42;

    SUBCASE("empty lexicon for M=0") {
        SimConfig empty = config;
        empty.item_count = 0;
        CHECK(random_proto(empty).empty());
    }
    SUBCASE("deterministic per seed") {
        CHECK(random_proto(config) == random_proto(config));
        SimConfig other = config;
        other.seed = 43;
        CHECK(random_proto(config) != random_proto(other));
    }
    SUBCASE("lengths and alphabet respected") {
        auto lex = random_proto(config);
        for (const auto& word : lex) {
            CHECK(word.size() >= 5);
            CHECK(word.size() <= 8);
            for (char32_t c : word) {
                CHECK(c >= U'a');
                CHECK(c <= U'z');
            }
        }
    }
    SUBCASE("random unrelated words stay far apart in NLD") {
        auto lex = random_proto(config);
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < lex.size(); ++i) {
            for (std::size_t j = i + 1; j < lex.size(); ++j) {
                if (lex[i] == lex[j])
                    continue;
                sum += nld(lex[i], lex[j]);
                ++count;
            }
        }
        CHECK(sum / static_cast<double>(count) > 0.7);
    }
    SUBCASE("config validation") {
        SimConfig bad = config;
        bad.alphabet_size = 1;
        CHECK_THROWS_AS(random_proto(bad), Error);
        bad = config;
        bad.min_word_length = 9;
        CHECK_THROWS_AS(random_proto(bad), Error);
    }
}

TEST_CASE("draw_rates") {
    SimConfig config;
    config.item_count = 2000;
    config.seed = 7;
    config.gamma_shape = 7.0;
    config.gamma_scale = 0.076;

    auto rates = draw_rates(config);
    REQUIRE(rates.size() == 2000);
    CHECK(rates == draw_rates(config));
    for (double r : rates)
        CHECK(r > 0.0);

    // sample moments near Gamma(7, 0.076): mean 0.532, sd 0.201
    double mean = 0.0;
    for (double r : rates)
        mean += r;
    mean /= 2000.0;
    double var = 0.0;
    for (double r : rates)
        var += (r - mean) * (r - mean);
    var /= 2000.0;
    CHECK(mean == doctest::Approx(7.0 * 0.076).epsilon(0.05));
    CHECK(std::sqrt(var) == doctest::Approx(std::sqrt(7.0) * 0.076).epsilon(0.1));

    SUBCASE("explicit rates pass through") {
        SimConfig exp_cfg;
        exp_cfg.item_count = 3;
        exp_cfg.explicit_rates = {0.1, 0.2, 0.3};
        CHECK(draw_rates(exp_cfg) == std::vector<double>{0.1, 0.2, 0.3});
        exp_cfg.explicit_rates = {0.1};
        CHECK_THROWS_AS(draw_rates(exp_cfg), Error);
    }
}

TEST_CASE("simulate_family basics") {
    SimConfig config;
    config.item_count = 20;
    config.seed = 5;
    auto proto = random_proto(config);
    std::vector<double> rates(20, 0.6);
    rates[3] = 0.0; // pinned item

    SUBCASE("zero-length branches copy the proto everywhere") {
        auto tree = FamilyTree::star(4, 0.0);
        auto db = simulate_family(proto, tree, rates, config);
        auto m = overlap_matrix(db, {});
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j)
                CHECK(m.value(i, j) == 1.0);
    }
    SUBCASE("rate zero keeps an item identical everywhere") {
        auto tree = FamilyTree::star(6, 2.0);
        auto db = simulate_family(proto, tree, rates, config);
        std::size_t item = 3;
        for (std::size_t l = 0; l < db.language_count(); ++l) {
            REQUIRE(db.slot(l, item).size() == 1);
            CHECK(db.slot(l, item)[0].normalized == proto[item]);
        }
    }
    SUBCASE("identical seeds give bitwise identical databases") {
        auto tree = FamilyTree::star(5, 1.5);
        auto a = simulate_family(proto, tree, rates, config);
        auto b = simulate_family(proto, tree, rates, config);
        std::ostringstream sa, sb;
        serialize_database(a, sa);
        serialize_database(b, sb);
        CHECK(sa.str() == sb.str());
    }
    SUBCASE("proto emission is optional") {
        auto tree = FamilyTree::star(3, 1.0);
        auto with = simulate_family(proto, tree, rates, config);
        CHECK(with.proto_language().has_value());
        CHECK(with.language_count() == 4);
        SimConfig no_proto = config;
        no_proto.emit_proto = false;
        auto without = simulate_family(proto, tree, rates, no_proto);
        CHECK_FALSE(without.proto_language().has_value());
        CHECK(without.language_count() == 3);
    }
    SUBCASE("mismatched sizes are config errors") {
        auto tree = FamilyTree::star(3, 1.0);
        std::vector<double> wrong(7, 0.5);
        CHECK_THROWS_AS(simulate_family(proto, tree, wrong, config), Error);
    }
    SUBCASE("clade tags reach the database") {
        auto tree = FamilyTree::two_clades(3, 0.5, 1.5);
        auto db = simulate_family(proto, tree, rates, config);
        std::size_t tagged = 0;
        for (const auto& lang : db.languages())
            tagged += lang.has_tag("cladeA") || lang.has_tag("cladeB");
        CHECK(tagged == 6);
    }
    SUBCASE("mutation drifts surviving words without changing their length") {
        SimConfig drift = config;
        drift.mutation_rate = 0.4;
        std::vector<double> pinned(20, 0.0); // survival everywhere
        auto tree = FamilyTree::star(6, 2.0);
        auto db = simulate_family(proto, tree, pinned, drift);
        std::size_t changed = 0;
        for (std::size_t l = 0; l < db.language_count(); ++l) {
            if (db.language(l).role == LanguageRole::Proto)
                continue;
            for (std::size_t i = 0; i < 20; ++i) {
                const auto& word = db.slot(l, i)[0].normalized;
                CHECK(word.size() == proto[i].size());
                changed += word != proto[i];
            }
        }
        CHECK(changed > 0);
        // same seed, same drift
        auto again = simulate_family(proto, tree, pinned, drift);
        std::ostringstream sa, sb;
        serialize_database(db, sa);
        serialize_database(again, sb);
        CHECK(sa.str() == sb.str());
    }
}

TEST_CASE("per-item survival matches the exponential model") {
    SimConfig config;
    config.item_count = 110;
    config.seed = 1;
    auto proto = random_proto(config);
    auto rates = draw_rates(config);
    auto tree = FamilyTree::star(60, 1.5);
    auto db = simulate_family(proto, tree, rates, config);

    auto proto_idx = db.proto_language();
    REQUIRE(proto_idx.has_value());
    auto moderns = db.modern_languages();
    REQUIRE(moderns.size() == 60);

    std::size_t outside = 0;
    for (std::size_t i = 0; i < 110; ++i) {
        std::size_t survived = 0;
        for (std::size_t m : moderns)
            survived += db.slot(m, i)[0].normalized == proto[i];
        double p = std::exp(-rates[i] * 1.5);
        double phat = static_cast<double>(survived) / 60.0;
        double se = std::sqrt(p * (1.0 - p) / 60.0);
        if (std::abs(phat - p) > 3.0 * se)
            ++outside;
    }
    // 3-sigma per item; all 110 inside for this seed
    CHECK(outside == 0);
}

TEST_CASE("expected_overlap") {
    std::vector<double> rates{0.2, 0.5, 0.9};
    std::span<const double> view(rates);

    CHECK(expected_overlap(view, 0.0, 0.3) == 1.0);
    CHECK(expected_overlap(view, 1e6, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(expected_overlap(view, 1.0, 1.0), Error);
    CHECK_THROWS_AS(expected_overlap(view, -1.0, 0.0), Error);

    SUBCASE("residual 0 reduces to the pure survival mean") {
        double t = 1.7;
        double manual = (std::exp(-0.2 * t) + std::exp(-0.5 * t) + std::exp(-0.9 * t)) / 3.0;
        CHECK(expected_overlap(view, t, 0.0) == doctest::Approx(manual).epsilon(1e-15));
    }
}

TEST_CASE("empirical overlap tracks the simulator forward model") {
    SimConfig config;
    config.item_count = 110;
    config.seed = 9;
    auto proto = random_proto(config);
    auto rates = draw_rates(config);
    auto tree = FamilyTree::star(60, 1.5);
    auto db = simulate_family(proto, tree, rates, config);

    // chance similarity of unrelated random words, estimated separately
    SimConfig other = config;
    other.seed = 123456;
    auto unrelated = random_proto(other);
    double residual = 0.0;
    for (std::size_t i = 0; i < 110; ++i)
        residual += 1.0 - nld(proto[i], unrelated[i]);
    residual /= 110.0;

    auto proto_idx = *db.proto_language();
    double mean_overlap = 0.0;
    auto moderns = db.modern_languages();
    for (std::size_t m : moderns)
        mean_overlap += language_overlap(db, proto_idx, m, {}).overlap;
    mean_overlap /= static_cast<double>(moderns.size());

    double expected = expected_overlap(rates, 1.5, residual);
    CHECK(mean_overlap == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("truth sidecar CSVs") {
    std::vector<double> rates{0.25, 0.5};
    auto csv = truth_rates_csv(rates);
    CHECK(csv.find("item_id,true_rate") != std::string::npos);
    CHECK(csv.find("i001,0.25") != std::string::npos);

    auto tree = FamilyTree::star(3, 1.5);
    auto times = truth_times_csv(tree);
    CHECK(times.find("leaf_a,leaf_b,true_t") != std::string::npos);
    CHECK(times.find("L01,L02,3") != std::string::npos);
}
