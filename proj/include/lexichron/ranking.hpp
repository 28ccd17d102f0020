#pragma once

#include "lexichron/metric.hpp"
#include "lexichron/stability.hpp"
#include "lexichron/wordlist.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lexichron {

// Items ordered by decreasing stability; ties broken by ascending
// item_id, so the order is deterministic.
struct RankedList {
    std::vector<std::string> item_ids;
    std::vector<double> values; // non-increasing
};

struct RandomBand {
    std::size_t item_count = 0;
    std::size_t trials = 0;
    std::vector<double> mean; // per m = 1..M
    std::vector<double> sd;
    // Empirical mean within 3 standard errors of m^2/M for every m.
    bool self_check_ok = false;
};

// c[m-1] = number of items the two top-m prefixes share, m = 1..M.
struct CommonCountCurve {
    std::size_t item_count = 0;
    std::vector<std::size_t> common;
    std::vector<double> baseline_random;        // m^2/M
    std::vector<std::size_t> baseline_identity; // m
    std::optional<RandomBand> band;
};

// Every table entry must be defined; drop_undefined first.
RankedList rank_items(const StabilityTable& table);

// Both lists must be permutations of the same item set.
CommonCountCurve common_count_curve(const RankedList& a, const RankedList& b);

// Monte Carlo mean/sd of c(m) under independent uniform rankings.
// Per-trial generators derive from the master seed, and the integer
// accumulation is order free, so any thread count gives the same band.
RandomBand random_baseline_band(std::size_t item_count, std::size_t trials,
                                std::uint64_t seed, std::size_t threads = 1);

// Restricts both databases to their common items, computes estimated
// stability per family, ranks, and compares. Items with undefined
// stability in either family are dropped (count via `dropped_items`).
CommonCountCurve compare_families(const LexicalDatabase& a, const LexicalDatabase& b,
                                  const SimilarityScorer& scorer,
                                  std::size_t threads = 1,
                                  std::size_t* dropped_items = nullptr);

std::string ranking_csv(const RankedList& list);
std::string curve_csv(const CommonCountCurve& curve);

} // namespace lexichron
