#pragma once

#include <cstdint>
#include <unordered_map>

#include "estq/error_model.hpp"
#include "estq/quadrature.hpp"

namespace estq {

// E[X | X <= t] for the log-normal error model, closed form:
//   e^{mu + sigma^2/2} * Phi((ln t - mu)/sigma - sigma) / Phi((ln t - mu)/sigma).
// Below the deep-tail cutoff (standardized argument < kTruncatedMeanTailCutoff,
// where the CDF underflows) the Mills-ratio asymptote t * z / (z - sigma) is
// returned; the conditional mean approaches t itself as t -> 0.
inline constexpr double kTruncatedMeanTailCutoff = -36.0;
double truncated_mean(const ErrorModel& model, double t);

// Index of a job that has attained a of service and carries the estimate
// est: 1/est at a == 0, otherwise 1 / (est - a * E[X | X <= est/a]).
// Strictly increasing in a; the denominator stays positive because
// E[X | X <= est/a] < est/a.
double gittins_score(double attained, double est, const ErrorModel& model);

// Alternative closed form sometimes quoted for the log-normal case, with a
// CDF-ratio in the exponent: 1 / (est - a * e^{mu + g}) where
//   g = sigma^2 * C((ln(est/a) - mu - sigma^2)/sigma) / (2 * C((ln(est/a) - mu)/sigma)).
// Computed for both readings of C (standard normal CDF / log-normal CDF).
// It disagrees with gittins_score away from the a -> 0 and est/a -> inf
// limits; kept as a diagnostic only.
struct GittinsVariantScores {
    double exact;            // gittins_score
    double cdf_ratio_normal; // C = standard normal CDF
    double cdf_ratio_lognormal;
};
GittinsVariantScores gittins_score_variants(double attained, double est,
                                            const ErrorModel& model);

// Efficiency ratio of a quantum of service for a job with attained service a
// and estimate est, with the unknown true size modeled as est / X:
//
//     P(est/X - a <= delta | est/X > a)
//   -------------------------------------
//   E[min(est/X - a, delta) | est/X > a]
//
// evaluated by adaptive quadrature over the error density on the log scale
// (absolute tolerance 1e-10). Throws on quadrature non-convergence with the
// achieved tolerance in the message.
double efficiency(double attained, double delta, double est, const ErrorModel& model);

// Closed-form delta -> infinity limit of the efficiency ratio,
//   1 / (est * E[1/X | X < est/a] - a),
// used as an independent algebraic cross-check of the quadrature.
double efficiency_complete_service_limit(double attained, double est,
                                         const ErrorModel& model);

// max of efficiency() over a log-spaced delta grid spanning
// [est * lo_factor, est * hi_factor].
double efficiency_sup_over_delta(double attained, double est, const ErrorModel& model,
                                 int grid_points = 160, double lo_factor = 1e-3,
                                 double hi_factor = 1e6);

// Per-run scorer with the optional truncated-mean memo (keyed on t rounded
// to ~12 significant digits by masking low mantissa bits). One instance per
// run; not shared across threads.
class GittinsScorer {
public:
    explicit GittinsScorer(ErrorModel model) : model_(model) {}

    const ErrorModel& model() const { return model_; }
    double score(double attained, double est);

private:
    double truncated_mean_memo(double t);

    ErrorModel model_;
    std::unordered_map<std::uint64_t, double> cache_;
};

}  // namespace estq
