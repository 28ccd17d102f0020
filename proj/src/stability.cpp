#include "lexichron/stability.hpp"

#include "lexichron/csv.hpp"
#include "lexichron/error.hpp"
#include "lexichron/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace lexichron {

namespace {

StabilityTable make_table(const LexicalDatabase& db, StabilityKind kind,
                          std::size_t languages_used) {
    StabilityTable table;
    table.kind = kind;
    table.languages_used = languages_used;
    table.item_ids.reserve(db.item_count());
    table.glosses.reserve(db.item_count());
    for (const auto& item : db.items()) {
        table.item_ids.push_back(item.item_id);
        table.glosses.push_back(item.gloss);
    }
    table.values.assign(db.item_count(), std::nullopt);
    return table;
}

} // namespace

StabilityTable actual_stability(const LexicalDatabase& db,
                                const SimilarityScorer& scorer) {
    auto proto = db.proto_language();
    if (!proto)
        raise(ErrKind::ConfigError, "actual stability needs a proto-role language");
    auto moderns = db.modern_languages();
    if (moderns.empty())
        raise(ErrKind::ConfigError, "actual stability needs at least one modern language");

    StabilityTable table = make_table(db, StabilityKind::Actual, moderns.size());
    for (std::size_t i = 0; i < db.item_count(); ++i) {
        const auto& proto_slot = db.slot(*proto, i);
        if (proto_slot.empty())
            continue;
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t m : moderns) {
            const auto& slot = db.slot(m, i);
            if (slot.empty())
                continue;
            sum += word_similarity(proto_slot, slot, scorer);
            ++count;
        }
        if (count > 0)
            table.values[i] = sum / static_cast<double>(count);
    }
    return table;
}

StabilityTable estimated_stability(const LexicalDatabase& db,
                                   const SimilarityScorer& scorer,
                                   std::size_t threads) {
    auto moderns = db.modern_languages();
    if (moderns.size() < 3)
        raise(ErrKind::ConfigError,
              "estimated stability needs at least 3 modern languages, have " +
                  std::to_string(moderns.size()));

    StabilityTable table = make_table(db, StabilityKind::Estimated, moderns.size());
    parallel_for(db.item_count(), threads, [&](std::size_t i) {
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < moderns.size(); ++a) {
            const auto& slot_a = db.slot(moderns[a], i);
            if (slot_a.empty())
                continue;
            for (std::size_t b = a + 1; b < moderns.size(); ++b) {
                const auto& slot_b = db.slot(moderns[b], i);
                if (slot_b.empty())
                    continue;
                sum += word_similarity(slot_a, slot_b, scorer);
                ++pairs;
            }
        }
        if (pairs > 0)
            table.values[i] = sum / static_cast<double>(pairs);
    });
    return table;
}

RateProfile rates_from_stability(const StabilityTable& table, double time_constant) {
    if (!(time_constant > 0.0))
        raise(ErrKind::ParameterError, "time constant must be positive");

    RateProfile profile;
    profile.kind = table.kind;
    profile.time_constant = time_constant;
    profile.item_ids = table.item_ids;
    profile.glosses = table.glosses;
    profile.rates.assign(table.values.size(), std::nullopt);
    profile.at_boundary.assign(table.values.size(), false);

    for (std::size_t i = 0; i < table.values.size(); ++i) {
        const auto& value = table.values[i];
        if (!value)
            continue;
        if (*value < 0.0 || *value > 1.0)
            raise(ErrKind::InternalError,
                  "stability outside [0,1] for item '" + table.item_ids[i] + "'");
        if (*value == 0.0)
            continue; // infinite rate stays undefined
        if (*value == 1.0) {
            profile.rates[i] = 0.0;
            profile.at_boundary[i] = true;
        } else {
            profile.rates[i] = -std::log(*value) / time_constant;
        }
    }
    return profile;
}

LambdaFit fit_lambda(const RateProfile& actual, const RateProfile& estimated) {
    if (actual.item_ids != estimated.item_ids)
        raise(ErrKind::DomainMismatch, "rate profiles cover different items");

    PairedSample sample = paired_defined(actual.rates, estimated.rates);
    if (sample.x.size() < 2)
        raise(ErrKind::DegenerateFit,
              "lambda fit needs at least 2 items defined in both profiles");

    double sum_rs = 0.0;
    double sum_ss = 0.0;
    for (std::size_t i = 0; i < sample.x.size(); ++i) {
        sum_rs += sample.x[i] * sample.y[i];
        sum_ss += sample.y[i] * sample.y[i];
    }
    if (sum_ss == 0.0)
        raise(ErrKind::DegenerateFit, "all estimated rates are zero");

    LambdaFit fit;
    fit.lambda = sum_rs / sum_ss;
    fit.method = LambdaFit::Method::RegressionThroughOrigin;
    fit.items_used = sample.x.size();
    fit.items_dropped = sample.dropped;

    double sq = 0.0;
    for (std::size_t i = 0; i < sample.x.size(); ++i) {
        double d = sample.x[i] - fit.lambda * sample.y[i];
        sq += d * d;
    }
    fit.residual = std::sqrt(sq / static_cast<double>(sample.x.size()));
    return fit;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        raise(ErrKind::DomainMismatch, "correlation inputs differ in length");
    const std::size_t n = x.size();
    if (n < 2)
        raise(ErrKind::ParameterError, "correlation needs at least 2 points");

    double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mean_x;
        double dy = y[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        raise(ErrKind::UndefinedCorrelation, "zero variance in correlation input");
    return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]])
            ++j;
        double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

} // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        raise(ErrKind::DomainMismatch, "correlation inputs differ in length");
    std::vector<double> rx = average_ranks(x);
    std::vector<double> ry = average_ranks(y);
    return pearson(rx, ry);
}

StabilityTable drop_undefined(const StabilityTable& table, std::size_t* dropped) {
    StabilityTable out;
    out.kind = table.kind;
    out.languages_used = table.languages_used;
    std::size_t removed = 0;
    for (std::size_t i = 0; i < table.values.size(); ++i) {
        if (!table.values[i]) {
            ++removed;
            continue;
        }
        out.item_ids.push_back(table.item_ids[i]);
        out.glosses.push_back(table.glosses[i]);
        out.values.push_back(table.values[i]);
    }
    if (dropped)
        *dropped = removed;
    return out;
}

PairedSample paired_defined(std::span<const std::optional<double>> x,
                            std::span<const std::optional<double>> y) {
    if (x.size() != y.size())
        raise(ErrKind::DomainMismatch, "paired sequences differ in length");
    PairedSample sample;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] && y[i]) {
            sample.x.push_back(*x[i]);
            sample.y.push_back(*y[i]);
        } else {
            ++sample.dropped;
        }
    }
    return sample;
}

std::string stability_csv(const StabilityTable& table) {
    std::ostringstream out;
    out << "# schema: stability-v1 item_id,gloss,value; kind="
        << (table.kind == StabilityKind::Actual ? "actual" : "estimated")
        << "; languages_used=" << table.languages_used << "; NA=undefined\n";
    out << "item_id,gloss,value\n";
    for (std::size_t i = 0; i < table.item_ids.size(); ++i)
        out << table.item_ids[i] << ',' << table.glosses[i] << ','
            << fmt_optional(table.values[i]) << '\n';
    return out.str();
}

std::string rates_csv(const RateProfile& profile) {
    std::ostringstream out;
    out << "# schema: rates-v1 item_id,gloss,value; kind="
        << (profile.kind == StabilityKind::Actual ? "actual" : "estimated")
        << "; unit=replacements/millennium; time_constant="
        << fmt_double(profile.time_constant) << "; NA=undefined\n";
    out << "item_id,gloss,value\n";
    for (std::size_t i = 0; i < profile.item_ids.size(); ++i)
        out << profile.item_ids[i] << ',' << profile.glosses[i] << ','
            << fmt_optional(profile.rates[i]) << '\n';
    return out.str();
}

std::string scatter_csv(const std::string& schema, const std::string& col_a,
                        const std::string& col_b,
                        const std::vector<std::string>& item_ids,
                        const std::vector<std::string>& glosses,
                        std::span<const std::optional<double>> a,
                        std::span<const std::optional<double>> b) {
    std::ostringstream out;
    out << "# schema: " << schema << '\n';
    out << "item_id,gloss," << col_a << ',' << col_b << '\n';
    for (std::size_t i = 0; i < item_ids.size(); ++i)
        out << item_ids[i] << ',' << glosses[i] << ',' << fmt_optional(a[i]) << ','
            << fmt_optional(b[i]) << '\n';
    return out.str();
}

std::string rates_histogram_csv(const RateProfile& actual,
                                const RateProfile& estimated) {
    constexpr double kBinWidth = 0.1;

    const auto defined = [](const RateProfile& p) {
        std::vector<double> out;
        for (const auto& r : p.rates)
            if (r)
                out.push_back(*r);
        return out;
    };
    std::vector<double> a = defined(actual);
    std::vector<double> e = defined(estimated);
    if (a.empty() || e.empty())
        raise(ErrKind::DegenerateFit, "histogram needs at least one defined rate "
                                      "per profile");

    double max_rate = std::max(*std::max_element(a.begin(), a.end()),
                               *std::max_element(e.begin(), e.end()));
    std::size_t bins = static_cast<std::size_t>(std::floor(max_rate / kBinWidth)) + 1;

    const auto frequencies = [&](const std::vector<double>& rates) {
        std::vector<double> freq(bins, 0.0);
        for (double r : rates) {
            auto bin = static_cast<std::size_t>(std::floor(r / kBinWidth));
            freq[std::min(bin, bins - 1)] += 1.0;
        }
        for (double& f : freq)
            f /= static_cast<double>(rates.size());
        return freq;
    };
    std::vector<double> fa = frequencies(a);
    std::vector<double> fe = frequencies(e);

    std::ostringstream out;
    out << "# schema: rate-histogram-v1 bin_lo,bin_hi,freq_actual,freq_estimated; "
           "bin width 0.1; frequency = count / defined entries\n";
    out << "bin_lo,bin_hi,freq_actual,freq_estimated\n";
    for (std::size_t k = 0; k < bins; ++k)
        out << fmt_double(kBinWidth * static_cast<double>(k)) << ','
            << fmt_double(kBinWidth * static_cast<double>(k + 1)) << ','
            << fmt_double(fa[k]) << ',' << fmt_double(fe[k]) << '\n';
    return out.str();
}

} // namespace lexichron
