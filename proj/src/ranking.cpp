#include "lexichron/ranking.hpp"

#include "lexichron/csv.hpp"
#include "lexichron/error.hpp"
#include "lexichron/parallel.hpp"
#include "lexichron/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace lexichron {

namespace {

constexpr std::uint64_t kBandDomain = 0x62616E64; // stream domain tag

} // namespace

RankedList rank_items(const StabilityTable& table) {
    if (table.item_ids.empty())
        raise(ErrKind::EmptyRanking, "cannot rank an empty stability table");
    for (std::size_t i = 0; i < table.values.size(); ++i)
        if (!table.values[i])
            raise(ErrKind::ConfigError, "undefined stability for item '" +
                                            table.item_ids[i] +
                                            "'; drop undefined entries first");

    std::vector<std::size_t> order(table.item_ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (*table.values[a] != *table.values[b])
            return *table.values[a] > *table.values[b];
        return table.item_ids[a] < table.item_ids[b];
    });

    RankedList list;
    list.item_ids.reserve(order.size());
    list.values.reserve(order.size());
    for (std::size_t idx : order) {
        list.item_ids.push_back(table.item_ids[idx]);
        list.values.push_back(*table.values[idx]);
    }
    return list;
}

namespace {

// Incremental prefix intersection: one pass, O(M) set operations.
std::vector<std::size_t> prefix_common_counts(const std::vector<std::size_t>& a,
                                              const std::vector<std::size_t>& b) {
    const std::size_t m = a.size();
    std::vector<char> in_a(m, 0), in_b(m, 0);
    std::vector<std::size_t> counts(m);
    std::size_t common = 0;
    for (std::size_t k = 0; k < m; ++k) {
        if (a[k] == b[k]) {
            in_a[a[k]] = 1;
            in_b[a[k]] = 1;
            ++common;
        } else {
            in_a[a[k]] = 1;
            in_b[b[k]] = 1;
            if (in_b[a[k]])
                ++common;
            if (in_a[b[k]])
                ++common;
        }
        counts[k] = common;
    }
    return counts;
}

} // namespace

CommonCountCurve common_count_curve(const RankedList& a, const RankedList& b) {
    const std::size_t m = a.item_ids.size();
    if (m != b.item_ids.size())
        raise(ErrKind::DomainMismatch, "rankings differ in length");

    std::unordered_map<std::string, std::size_t> index_in_a;
    index_in_a.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        index_in_a.emplace(a.item_ids[i], i);
    std::vector<std::size_t> a_ids(m), b_ids(m);
    std::iota(a_ids.begin(), a_ids.end(), 0);
    for (std::size_t i = 0; i < m; ++i) {
        auto it = index_in_a.find(b.item_ids[i]);
        if (it == index_in_a.end())
            raise(ErrKind::DomainMismatch,
                  "item '" + b.item_ids[i] + "' missing from the other ranking");
        b_ids[i] = it->second;
    }

    CommonCountCurve curve;
    curve.item_count = m;
    curve.common = prefix_common_counts(a_ids, b_ids);
    curve.baseline_random.resize(m);
    curve.baseline_identity.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        double mm = static_cast<double>(k + 1);
        curve.baseline_random[k] = mm * mm / static_cast<double>(m);
        curve.baseline_identity[k] = k + 1;
    }
    return curve;
}

RandomBand random_baseline_band(std::size_t item_count, std::size_t trials,
                                std::uint64_t seed, std::size_t threads) {
    if (item_count == 0)
        raise(ErrKind::ParameterError, "item count must be positive");
    if (trials == 0)
        raise(ErrKind::ParameterError, "trials must be >= 1");

    const std::size_t m = item_count;
    // Integer accumulators: order-free, so thread counts cannot change
    // the totals. c <= m <= ~1e3 and trials <= ~1e6 fit comfortably.
    std::vector<std::vector<std::uint64_t>> sums(threads ? threads : 1),
        sq_sums(threads ? threads : 1);
    std::size_t lanes = std::max<std::size_t>(threads, 1);
    for (std::size_t t = 0; t < lanes; ++t) {
        sums[t].assign(m, 0);
        sq_sums[t].assign(m, 0);
    }

    std::vector<std::size_t> lane_of(trials);
    for (std::size_t t = 0; t < trials; ++t)
        lane_of[t] = t % lanes;

    parallel_for(trials, threads, [&](std::size_t trial) {
        SplitMix64 rng = derive_stream(seed, kBandDomain, trial);
        std::vector<std::size_t> pa(m), pb(m);
        std::iota(pa.begin(), pa.end(), 0);
        std::iota(pb.begin(), pb.end(), 0);
        for (std::size_t i = m; i > 1; --i)
            std::swap(pa[i - 1], pa[rng.next_below(i)]);
        for (std::size_t i = m; i > 1; --i)
            std::swap(pb[i - 1], pb[rng.next_below(i)]);
        auto counts = prefix_common_counts(pa, pb);
        auto& sum = sums[lane_of[trial]];
        auto& sq = sq_sums[lane_of[trial]];
        for (std::size_t k = 0; k < m; ++k) {
            sum[k] += counts[k];
            sq[k] += counts[k] * counts[k];
        }
    });

    RandomBand band;
    band.item_count = m;
    band.trials = trials;
    band.mean.resize(m);
    band.sd.resize(m);
    band.self_check_ok = true;
    for (std::size_t k = 0; k < m; ++k) {
        std::uint64_t total = 0, total_sq = 0;
        for (std::size_t t = 0; t < lanes; ++t) {
            total += sums[t][k];
            total_sq += sq_sums[t][k];
        }
        double n = static_cast<double>(trials);
        double mean = static_cast<double>(total) / n;
        double var = static_cast<double>(total_sq) / n - mean * mean;
        band.mean[k] = mean;
        band.sd[k] = std::sqrt(std::max(0.0, var));
        double expected = static_cast<double>((k + 1) * (k + 1)) / static_cast<double>(m);
        double se = band.sd[k] / std::sqrt(n);
        if (std::abs(mean - expected) > 3.0 * se)
            band.self_check_ok = false;
    }
    return band;
}

CommonCountCurve compare_families(const LexicalDatabase& a, const LexicalDatabase& b,
                                  const SimilarityScorer& scorer,
                                  std::size_t threads, std::size_t* dropped_items) {
    if (a.modern_languages().size() < 3 || b.modern_languages().size() < 3)
        raise(ErrKind::ComparisonError,
              "family comparison needs at least 3 modern languages per family");

    auto shared = common_items(a, b);
    if (shared.size() < 2)
        raise(ErrKind::ComparisonError,
              "family comparison needs at least 2 common items, have " +
                  std::to_string(shared.size()));
    std::set<std::string> shared_set(shared.begin(), shared.end());

    LexicalDatabase ra = subset(a, all_languages(), shared_set);
    LexicalDatabase rb = subset(b, all_languages(), shared_set);

    StabilityTable sa = estimated_stability(ra, scorer, threads);
    StabilityTable sb = estimated_stability(rb, scorer, threads);

    // Keep only items defined in both families.
    std::unordered_set<std::string> defined;
    for (std::size_t i = 0; i < sa.item_ids.size(); ++i)
        if (sa.values[i])
            defined.insert(sa.item_ids[i]);
    std::set<std::string> keep;
    for (std::size_t i = 0; i < sb.item_ids.size(); ++i)
        if (sb.values[i] && defined.count(sb.item_ids[i]))
            keep.insert(sb.item_ids[i]);
    if (dropped_items)
        *dropped_items = shared.size() - keep.size();
    if (keep.size() < 2)
        raise(ErrKind::ComparisonError,
              "fewer than 2 common items have defined stability in both families");

    const auto filter = [&](const StabilityTable& t) {
        StabilityTable out;
        out.kind = t.kind;
        out.languages_used = t.languages_used;
        for (std::size_t i = 0; i < t.item_ids.size(); ++i) {
            if (!keep.count(t.item_ids[i]))
                continue;
            out.item_ids.push_back(t.item_ids[i]);
            out.glosses.push_back(t.glosses[i]);
            out.values.push_back(t.values[i]);
        }
        return out;
    };

    return common_count_curve(rank_items(filter(sa)), rank_items(filter(sb)));
}

std::string ranking_csv(const RankedList& list) {
    std::ostringstream out;
    out << "# schema: ranking-v1 rank,item_id,value; decreasing stability, "
           "ties by ascending item_id\n";
    out << "rank,item_id,value\n";
    for (std::size_t i = 0; i < list.item_ids.size(); ++i)
        out << (i + 1) << ',' << list.item_ids[i] << ',' << fmt_double(list.values[i])
            << '\n';
    return out.str();
}

std::string curve_csv(const CommonCountCurve& curve) {
    std::ostringstream out;
    out << "# schema: common-count-curve-v1 "
           "m,c,baseline_random,baseline_identity,band_mean,band_sd; "
           "NA=band not computed\n";
    out << "m,c,baseline_random,baseline_identity,band_mean,band_sd\n";
    for (std::size_t k = 0; k < curve.item_count; ++k) {
        out << (k + 1) << ',' << curve.common[k] << ','
            << fmt_double(curve.baseline_random[k]) << ','
            << curve.baseline_identity[k] << ',';
        if (curve.band) {
            out << fmt_double(curve.band->mean[k]) << ','
                << fmt_double(curve.band->sd[k]);
        } else {
            out << "NA,NA";
        }
        out << '\n';
    }
    return out.str();
}

} // namespace lexichron
