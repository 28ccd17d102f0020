#include "lexichron/chrono.hpp"

#include "lexichron/csv.hpp"
#include "lexichron/error.hpp"
#include "lexichron/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lexichron {

namespace {

void check_overlap_domain(double overlap) {
    if (!(overlap > 0.0))
        raise(ErrKind::DivergenceError,
              "overlap " + fmt_double(overlap) + " gives an infinite time");
    if (overlap > 1.0)
        raise(ErrKind::DomainError, "overlap " + fmt_double(overlap) + " exceeds 1");
}

void check_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        raise(ErrKind::ParameterError, "lambda must be positive");
}

// Fraction of items whose rate is 0: forward_overlap(t) -> floor as t grows.
double zero_rate_floor(std::span<const double> rates) {
    std::size_t zeros = 0;
    for (double r : rates)
        if (r == 0.0)
            ++zeros;
    return static_cast<double>(zeros) / static_cast<double>(rates.size());
}

} // namespace

double classic_time(double overlap, double rate) {
    if (!(rate > 0.0))
        raise(ErrKind::ParameterError, "replacement rate must be positive");
    check_overlap_domain(overlap);
    if (overlap == 1.0)
        return 0.0;
    return -std::log(overlap) / rate;
}

std::vector<double> complete_rates(const RateProfile& profile) {
    std::vector<double> rates;
    rates.reserve(profile.rates.size());
    for (std::size_t i = 0; i < profile.rates.size(); ++i) {
        if (!profile.rates[i])
            raise(ErrKind::ProfileIncomplete,
                  "rate undefined for item '" + profile.item_ids[i] + "'");
        rates.push_back(*profile.rates[i]);
    }
    if (rates.empty())
        raise(ErrKind::ProfileIncomplete, "rate profile is empty");
    return rates;
}

double forward_overlap(std::span<const double> rates, double lambda, double t) {
    check_lambda(lambda);
    if (t < 0.0)
        raise(ErrKind::ParameterError, "time must be non-negative");
    if (rates.empty())
        raise(ErrKind::ProfileIncomplete, "rate profile is empty");
    double sum = 0.0;
    for (double r : rates) // ascending item order, fixed accumulation
        sum += std::exp(-lambda * r * t);
    return sum / static_cast<double>(rates.size());
}

double forward_overlap(const RateProfile& profile, double lambda, double t) {
    return forward_overlap(std::span<const double>(complete_rates(profile)), lambda, t);
}

double invert_time(double overlap, std::span<const double> rates, double lambda,
                   double tolerance) {
    check_lambda(lambda);
    if (!(tolerance > 0.0))
        raise(ErrKind::ParameterError, "tolerance must be positive");
    check_overlap_domain(overlap);
    if (rates.empty())
        raise(ErrKind::ProfileIncomplete, "rate profile is empty");
    if (overlap == 1.0)
        return 0.0;

    const double floor = zero_rate_floor(rates);
    if (overlap <= floor)
        raise(ErrKind::DivergenceError,
              "overlap " + fmt_double(overlap) +
                  " is at or below the zero-rate floor " + fmt_double(floor));

    double lo = 0.0;
    double hi = 1.0;
    double f_hi = forward_overlap(rates, lambda, hi);
    double f_prev = 1.0;
    while (f_hi > overlap) {
        if (f_hi > f_prev)
            raise(ErrKind::InternalError, "forward overlap increased with time");
        f_prev = f_hi;
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12)
            raise(ErrKind::DivergenceError,
                  "overlap " + fmt_double(overlap) + " unreachable below t=1e12");
        f_hi = forward_overlap(rates, lambda, hi);
    }

    // Invariant: forward(lo) >= overlap >= forward(hi).
    while (hi - lo > tolerance) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break; // bracket at floating point resolution
        if (forward_overlap(rates, lambda, mid) >= overlap)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double invert_time(double overlap, const RateProfile& profile, double lambda,
                   double tolerance) {
    auto rates = complete_rates(profile);
    return invert_time(overlap, std::span<const double>(rates), lambda, tolerance);
}

GammaFit fit_gamma_moments(std::span<const double> rates) {
    if (rates.size() < 2)
        raise(ErrKind::ParameterError, "moment fit needs at least 2 rates");
    double mean = 0.0;
    for (double r : rates)
        mean += r;
    mean /= static_cast<double>(rates.size());
    double var = 0.0;
    for (double r : rates)
        var += (r - mean) * (r - mean);
    var /= static_cast<double>(rates.size()); // population variance
    if (var == 0.0)
        raise(ErrKind::DegenerateFit, "rates have zero variance");
    return gamma_fit_from_moments(mean, std::sqrt(var));
}

GammaFit gamma_fit_from_moments(double mean, double sd) {
    if (!(mean > 0.0))
        raise(ErrKind::DegenerateFit, "rate mean must be positive");
    if (!(sd > 0.0))
        raise(ErrKind::DegenerateFit, "rate deviation must be positive");
    GammaFit fit;
    fit.source_mean = mean;
    fit.source_sd = sd;
    fit.shape_z = (mean / sd) * (mean / sd);
    fit.scale_p = sd * sd / mean;
    return fit;
}

double gamma_time(double overlap, double lambda, const GammaFit& fit) {
    check_lambda(lambda);
    if (!(fit.shape_z > 0.0) || !(fit.scale_p > 0.0))
        raise(ErrKind::ParameterError, "gamma fit parameters must be positive");
    check_overlap_domain(overlap);
    if (overlap == 1.0)
        return 0.0;
    return (std::pow(overlap, -1.0 / fit.shape_z) - 1.0) / (lambda * fit.scale_p);
}

double calibrate_lambda(const LexicalDatabase& db, const RateProfile& profile,
                        const std::pair<std::string, std::string>& anchor_pair,
                        double known_t, const SimilarityScorer& scorer,
                        double tolerance) {
    if (!(known_t > 0.0))
        raise(ErrKind::ParameterError, "anchor time must be positive");
    if (!(tolerance > 0.0))
        raise(ErrKind::ParameterError, "tolerance must be positive");
    auto a = db.find_language(anchor_pair.first);
    auto b = db.find_language(anchor_pair.second);
    if (!a)
        raise(ErrKind::ConfigError, "unknown anchor language '" + anchor_pair.first + "'");
    if (!b)
        raise(ErrKind::ConfigError, "unknown anchor language '" + anchor_pair.second + "'");
    if (*a == *b)
        raise(ErrKind::ConfigError, "anchor pair must name two distinct languages");

    double overlap = language_overlap(db, *a, *b, scorer).overlap;
    if (overlap >= 1.0)
        raise(ErrKind::CalibrationImpossible,
              "anchor pair has overlap 1 at positive time separation");
    check_overlap_domain(overlap);

    // forward_overlap depends on lambda and t only through their product,
    // so bisection on x = lambda * known_t is bisection in lambda.
    auto rates = complete_rates(profile);
    double x = invert_time(overlap, rates, 1.0, tolerance * known_t);
    return x / known_t;
}

TimeDistanceMatrix::TimeDistanceMatrix(std::vector<std::string> labels,
                                       TimeMethod method,
                                       std::optional<double> lambda_used)
    : labels_(std::move(labels)),
      times_(labels_.size() * labels_.size(),
             std::numeric_limits<double>::quiet_NaN()),
      method_(method), lambda_used_(lambda_used) {}

bool TimeDistanceMatrix::defined(std::size_t i, std::size_t j) const {
    return !std::isnan(time(i, j));
}

void TimeDistanceMatrix::set(std::size_t i, std::size_t j, double t) {
    times_[i * size() + j] = t;
    times_[j * size() + i] = t;
}

const char* time_method_name(TimeMethod method) {
    switch (method) {
    case TimeMethod::Classic: return "classic";
    case TimeMethod::Generalized: return "generalized";
    case TimeMethod::GammaClosedForm: return "gamma";
    }
    return "unknown";
}

TimeDistanceMatrix time_matrix(const LexicalDatabase& db, const RateProfile& profile,
                               double lambda, const SimilarityScorer& scorer,
                               TimeMethod method, std::size_t threads,
                               double tolerance) {
    check_lambda(lambda);
    if (profile.item_ids.size() != db.item_count())
        raise(ErrKind::ConfigError, "rate profile does not match the database items");
    for (std::size_t i = 0; i < db.item_count(); ++i)
        if (profile.item_ids[i] != db.item(i).item_id)
            raise(ErrKind::ConfigError,
                  "rate profile item '" + profile.item_ids[i] +
                      "' does not match database item '" + db.item(i).item_id + "'");

    auto rates = complete_rates(profile);
    double mean_rate = 0.0;
    for (double r : rates)
        mean_rate += r;
    mean_rate /= static_cast<double>(rates.size());

    GammaFit fit;
    if (method == TimeMethod::GammaClosedForm)
        fit = fit_gamma_moments(rates);

    OverlapMatrix overlaps = overlap_matrix(db, scorer, threads);

    TimeDistanceMatrix matrix(overlaps.labels(), method, lambda);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < matrix.size(); ++i)
        for (std::size_t j = i + 1; j < matrix.size(); ++j)
            pairs.emplace_back(i, j);

    std::vector<char> clamped_flags(pairs.size(), 0);
    parallel_for(pairs.size(), threads, [&](std::size_t k) {
        auto [i, j] = pairs[k];
        if (!overlaps.defined(i, j))
            return;
        double overlap = overlaps.value(i, j);
        if (overlap > 1.0) { // numerically impossible in exact arithmetic
            matrix.set(i, j, 0.0);
            clamped_flags[k] = 1;
            return;
        }
        try {
            double t = 0.0;
            switch (method) {
            case TimeMethod::Classic:
                t = classic_time(overlap, lambda * mean_rate);
                break;
            case TimeMethod::Generalized:
                t = invert_time(overlap, rates, lambda, tolerance);
                break;
            case TimeMethod::GammaClosedForm:
                t = gamma_time(overlap, lambda, fit);
                break;
            }
            matrix.set(i, j, t);
        } catch (const Error& e) {
            if (e.kind() != ErrKind::DivergenceError)
                throw;
            // flagged undefined entry: stays NaN
        }
    });
    for (std::size_t k = 0; k < pairs.size(); ++k)
        if (clamped_flags[k])
            matrix.clamped.push_back(pairs[k]);

    for (std::size_t i = 0; i < matrix.size(); ++i)
        matrix.set(i, i, 0.0);
    return matrix;
}

std::string time_matrix_csv(const TimeDistanceMatrix& m) {
    std::string schema = "time-matrix-v1 language,<one column per language>; "
                         "millennia; method=";
    schema += time_method_name(m.method());
    if (m.lambda_used())
        schema += "; lambda=" + fmt_double(*m.lambda_used());
    schema += "; NA=undefined";
    return matrix_csv(schema, m.labels(), m.times());
}

} // namespace lexichron
