#pragma once

#include "lexichron/metric.hpp"
#include "lexichron/stability.hpp"
#include "lexichron/wordlist.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lexichron {

inline constexpr double kDefaultTimeTolerance = 1e-10; // millennia

// Gamma rate density fitted by moments: shape Z = (mean/sd)^2 and scale
// P = sd^2/mean, with sd the population standard deviation.
struct GammaFit {
    double shape_z = 0.0;
    double scale_p = 0.0;
    double source_mean = 0.0;
    double source_sd = 0.0;
};

enum class TimeMethod { Classic, Generalized, GammaClosedForm };

// -ln(overlap) / rate. The single-rate time formula.
double classic_time(double overlap, double rate);

// Every rate must be defined (ErrKind::ProfileIncomplete otherwise).
std::vector<double> complete_rates(const RateProfile& profile);

// (1/M) * sum_i exp(-lambda * rate_i * t), summed in ascending item order.
double forward_overlap(std::span<const double> rates, double lambda, double t);
double forward_overlap(const RateProfile& profile, double lambda, double t);

// The unique t >= 0 with forward_overlap(rates, lambda, t) == overlap.
// Bracketing grown geometrically, then bisection until the bracket is
// narrower than `tolerance`. Overlaps at or below the zero-rate floor
// raise ErrKind::DivergenceError.
double invert_time(double overlap, std::span<const double> rates, double lambda,
                   double tolerance = kDefaultTimeTolerance);
double invert_time(double overlap, const RateProfile& profile, double lambda,
                   double tolerance = kDefaultTimeTolerance);

GammaFit fit_gamma_moments(std::span<const double> rates);
GammaFit gamma_fit_from_moments(double mean, double sd);

// Closed form under the Gamma rate model:
// t = (overlap^(-1/Z) - 1) / (lambda * P).
double gamma_time(double overlap, double lambda, const GammaFit& fit);

// The unique lambda > 0 with forward_overlap(rates, lambda, known_t) equal
// to the pair's observed overlap. Solved by monotone bisection on the
// product lambda * known_t. `tolerance` bounds the error on lambda.
double calibrate_lambda(const LexicalDatabase& db, const RateProfile& profile,
                        const std::pair<std::string, std::string>& anchor_pair,
                        double known_t, const SimilarityScorer& scorer,
                        double tolerance = 1e-12);

class TimeDistanceMatrix {
  public:
    TimeDistanceMatrix(std::vector<std::string> labels, TimeMethod method,
                       std::optional<double> lambda_used);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    TimeMethod method() const { return method_; }
    std::optional<double> lambda_used() const { return lambda_used_; }

    double time(std::size_t i, std::size_t j) const { return times_[i * size() + j]; }
    bool defined(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, double t);

    const std::vector<double>& times() const { return times_; }

    // Pairs whose overlap exceeded 1 numerically and were clamped to t=0.
    std::vector<std::pair<std::size_t, std::size_t>> clamped;

  private:
    std::vector<std::string> labels_;
    std::vector<double> times_; // NaN where no time could be computed
    TimeMethod method_;
    std::optional<double> lambda_used_;
};

const char* time_method_name(TimeMethod method);

// Applies the selected time operation to every language pair of the
// database's overlap matrix. The profile must list exactly the database's
// items. Per-pair failures (no comparable items, overlap at the floor)
// become NaN entries; the diagonal is 0.
TimeDistanceMatrix time_matrix(const LexicalDatabase& db, const RateProfile& profile,
                               double lambda, const SimilarityScorer& scorer,
                               TimeMethod method, std::size_t threads = 1,
                               double tolerance = kDefaultTimeTolerance);

std::string time_matrix_csv(const TimeDistanceMatrix& m);

} // namespace lexichron
