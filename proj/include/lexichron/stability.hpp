#pragma once

#include "lexichron/metric.hpp"
#include "lexichron/wordlist.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lexichron {

// Millennia separating the usual Romance calibration points from the
// present: Vulgar Latin (~500 CE) and Late Classical Latin (~150 CE).
inline constexpr double kVulgarLatinDepth = 1.5;
inline constexpr double kLateClassicalLatinDepth = 1.85;

enum class StabilityKind { Actual, Estimated };

// Per-item stability in [0, 1]. nullopt marks items with insufficient
// data; they are never silently defaulted.
struct StabilityTable {
    StabilityKind kind;
    std::size_t languages_used = 0;
    std::vector<std::string> item_ids;
    std::vector<std::string> glosses;
    std::vector<std::optional<double>> values;
};

// Per-item replacement rates (replacements per millennium) derived from a
// stability table with the given time constant. A rate of 0 comes from a
// stability of exactly 1 and is flagged as a boundary value.
struct RateProfile {
    StabilityKind kind;
    double time_constant = 0.0;
    std::vector<std::string> item_ids;
    std::vector<std::string> glosses;
    std::vector<std::optional<double>> rates;
    std::vector<bool> at_boundary;
};

struct LambdaFit {
    enum class Method { RegressionThroughOrigin, SinglePairCalibration };
    double lambda = 0.0;
    Method method = Method::RegressionThroughOrigin;
    double residual = 0.0; // RMS of r - lambda*s over the items used
    std::size_t items_used = 0;
    std::size_t items_dropped = 0;
};

// Mean similarity between the proto slot and each modern slot, per item.
// Needs exactly one proto-role language and at least one modern.
StabilityTable actual_stability(const LexicalDatabase& db,
                                const SimilarityScorer& scorer);

// Mean similarity over unordered modern-language pairs, per item. The
// proto language, when present, is excluded. Needs >= 3 modern languages.
// Items may be computed concurrently; each item accumulates its pair sum
// in ascending pair order, so results do not depend on the thread count.
StabilityTable estimated_stability(const LexicalDatabase& db,
                                   const SimilarityScorer& scorer,
                                   std::size_t threads = 1);

// rate = -ln(value) / time_constant. Stability 1 -> rate 0 (boundary);
// stability 0 or undefined -> undefined rate.
RateProfile rates_from_stability(const StabilityTable& table, double time_constant);

// Regression through the origin: lambda = sum(r*s) / sum(s^2) over items
// defined in both profiles. Items undefined in either are dropped and
// counted.
LambdaFit fit_lambda(const RateProfile& actual, const RateProfile& estimated);

double pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation of average ranks (ties share their mean rank).
double spearman(std::span<const double> x, std::span<const double> y);

// Keeps only items with a defined value.
StabilityTable drop_undefined(const StabilityTable& table,
                              std::size_t* dropped = nullptr);

// (x, y) pairs where both sequences are defined, plus the dropped count.
struct PairedSample {
    std::vector<double> x;
    std::vector<double> y;
    std::size_t dropped = 0;
};
PairedSample paired_defined(std::span<const std::optional<double>> x,
                            std::span<const std::optional<double>> y);

std::string stability_csv(const StabilityTable& table);
std::string rates_csv(const RateProfile& profile);

// Paired columns behind the stability and rate scatter plots.
std::string scatter_csv(const std::string& schema, const std::string& col_a,
                        const std::string& col_b,
                        const std::vector<std::string>& item_ids,
                        const std::vector<std::string>& glosses,
                        std::span<const std::optional<double>> a,
                        std::span<const std::optional<double>> b);

// Rate distribution data: fixed bins of width 0.1 from 0 up to the last
// bin containing a value, one frequency column per profile. Frequencies
// are counts over the profile's defined entries, so each column sums to 1.
std::string rates_histogram_csv(const RateProfile& actual,
                                const RateProfile& estimated);

} // namespace lexichron
