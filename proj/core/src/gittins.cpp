#include "estq/gittins.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "estq/normal.hpp"

namespace estq {

double truncated_mean(const ErrorModel& model, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("truncated_mean: t must be > 0");
    if (model.degenerate()) {
        // point mass at e^mu; conditional mean is the mass point when it is
        // inside the truncation, else the truncation point itself (vacuous
        // conditioning, returned as the t -> 0 limit value).
        const double m = std::exp(model.mu);
        return t >= m ? m : t;
    }
    const double z = (std::log(t) - model.mu) / model.sigma;
    if (z - model.sigma <= kTruncatedMeanTailCutoff) {
        // CDF underflow region: E[X | X <= t] = t * z/(z - sigma) * (1 + o(1)).
        return t * (z / (z - model.sigma));
    }
    const double num = norm_cdf(z - model.sigma);
    const double den = norm_cdf(z);
    return model.mean() * (num / den);
}

double gittins_score(double attained, double est, const ErrorModel& model) {
    if (!(est > 0.0)) throw std::invalid_argument("gittins_score: est must be > 0");
    if (attained < 0.0) throw std::invalid_argument("gittins_score: attained must be >= 0");
    if (attained == 0.0) return 1.0 / est;
    const double m = truncated_mean(model, est / attained);
    return 1.0 / (est - attained * m);
}

GittinsVariantScores gittins_score_variants(double attained, double est,
                                            const ErrorModel& model) {
    GittinsVariantScores out{};
    out.exact = gittins_score(attained, est, model);
    if (attained == 0.0 || model.degenerate()) {
        out.cdf_ratio_normal = out.exact;
        out.cdf_ratio_lognormal = out.exact;
        return out;
    }
    const double sigma = model.sigma;
    const double mu = model.mu;
    const double l = std::log(est / attained);
    const double zn_num = (l - mu - sigma * sigma) / sigma;
    const double zn_den = (l - mu) / sigma;

    const auto variant = [&](double cnum, double cden) {
        const double g = sigma * sigma * cnum / (2.0 * cden);
        const double denom = est - attained * std::exp(mu + g);
        return denom > 0.0 ? 1.0 / denom : std::numeric_limits<double>::infinity();
    };
    out.cdf_ratio_normal = variant(norm_cdf(zn_num), norm_cdf(zn_den));
    // "log-normal CDF" reading: evaluate the Log-N(0, sigma^2) CDF at the
    // already-standardized arguments.
    const auto logn_cdf = [&](double x) {
        return x <= 0.0 ? 0.0 : norm_cdf(std::log(x) / sigma);
    };
    out.cdf_ratio_lognormal = variant(logn_cdf(zn_num), logn_cdf(zn_den));
    return out;
}

namespace {

constexpr double kQuadTol = 1e-10;
constexpr double kTailSigmas = 40.0;

// Integral of the standard-normal-weighted g(y) over [ylo, yhi], y = log x.
// Integrated per panel of width sigma so the density bump cannot slip
// between the probe points of a single adaptive call on a wide interval.
template <class G>
double log_space_integral(const ErrorModel& model, double ylo, double yhi, const G& g) {
    if (!(yhi > ylo)) return 0.0;
    const double mu = model.mu;
    const double sigma = model.sigma;
    const auto f = [&](double y) {
        const double z = (y - mu) / sigma;
        return norm_pdf(z) / sigma * g(y);
    };
    const int n_panels =
        std::max(1, static_cast<int>(std::ceil((yhi - ylo) / sigma)));
    const double panel_tol = kQuadTol / static_cast<double>(n_panels);
    double total = 0.0;
    double achieved = 0.0;
    bool ok = true;
    for (int p = 0; p < n_panels; ++p) {
        const double a = ylo + (yhi - ylo) * static_cast<double>(p) / n_panels;
        const double b = ylo + (yhi - ylo) * static_cast<double>(p + 1) / n_panels;
        const auto out = integrate(f, a, b, panel_tol);
        total += out.value;
        achieved += out.error_estimate;
        ok = ok && out.converged;
    }
    if (!ok) {
        throw std::runtime_error("efficiency: quadrature did not converge, achieved tol " +
                                 std::to_string(achieved));
    }
    return total;
}

}  // namespace

double efficiency(double attained, double delta, double est, const ErrorModel& model) {
    if (!(est > 0.0) || !(delta > 0.0) || attained < 0.0) {
        throw std::invalid_argument("efficiency: need est > 0, delta > 0, attained >= 0");
    }
    if (model.degenerate()) {
        // X == e^mu: true size is est/e^mu exactly.
        const double s = est / std::exp(model.mu);
        if (s <= attained) throw std::invalid_argument("efficiency: P(est/X > a) == 0");
        const double rem = s - attained;
        return delta >= rem ? 1.0 / rem : 0.0;
    }
    const double mu = model.mu;
    const double sigma = model.sigma;
    const double y_tail_lo = mu - kTailSigmas * sigma;
    const double y_tail_hi = mu + kTailSigmas * sigma;

    // survival condition est/X > a  <=>  X < c; completion within delta
    // <=>  X >= b
    const double y_c = attained > 0.0 ? std::log(est / attained) : y_tail_hi;
    const double y_b = std::log(est / (attained + delta));
    const double yc = std::min(y_c, y_tail_hi);
    const double yb = std::max(y_b, y_tail_lo);

    const double numerator =
        log_space_integral(model, std::min(yb, yc), yc, [](double) { return 1.0; });

    // E[min(est/X - a, delta); X < c] =
    //   delta * P(X < b)  +  integral over b <= X < c of (est/X - a)
    const double below_b =
        log_space_integral(model, y_tail_lo, std::min(yb, yc), [](double) { return 1.0; });
    const double partial = log_space_integral(
        model, std::min(yb, yc), yc,
        [&](double y) { return est * std::exp(-y) - attained; });
    const double denominator = delta * below_b + partial;
    if (denominator <= 0.0) {
        throw std::invalid_argument("efficiency: P(est/X > a) vanishes at these arguments");
    }
    return numerator / denominator;
}

double efficiency_complete_service_limit(double attained, double est,
                                         const ErrorModel& model) {
    if (!(est > 0.0) || attained < 0.0) {
        throw std::invalid_argument("efficiency_complete_service_limit: bad arguments");
    }
    const double mu = model.mu;
    const double sigma = model.sigma;
    // E[1/X ; X < c] = e^{-mu + sigma^2/2} * Phi(z + sigma), z = (ln c - mu)/sigma
    double recip_mass, prob;
    if (attained == 0.0) {
        recip_mass = std::exp(-mu + 0.5 * sigma * sigma);
        prob = 1.0;
    } else {
        const double z = (std::log(est / attained) - mu) / sigma;
        recip_mass = std::exp(-mu + 0.5 * sigma * sigma) * norm_cdf(z + sigma);
        prob = norm_cdf(z);
        if (prob <= 0.0) {
            throw std::invalid_argument("efficiency_complete_service_limit: P(est/X > a) == 0");
        }
    }
    return 1.0 / (est * recip_mass / prob - attained);
}

double efficiency_sup_over_delta(double attained, double est, const ErrorModel& model,
                                 int grid_points, double lo_factor, double hi_factor) {
    if (grid_points < 2) throw std::invalid_argument("efficiency_sup_over_delta: grid too small");
    const double llo = std::log(est * lo_factor);
    const double lhi = std::log(est * hi_factor);
    double best = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double t = llo + (lhi - llo) * static_cast<double>(i) /
                                   static_cast<double>(grid_points - 1);
        best = std::max(best, efficiency(attained, std::exp(t), est, model));
    }
    return best;
}

double GittinsScorer::truncated_mean_memo(double t) {
    // drop 12 low mantissa bits: keys agree to ~2^-40 relative (12 significant
    // digits), cached value equals fresh evaluation at the keyed argument.
    const std::uint64_t key = std::bit_cast<std::uint64_t>(t) & ~0xfffULL;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double v = truncated_mean(model_, std::bit_cast<double>(key));
    cache_.emplace(key, v);
    return v;
}

double GittinsScorer::score(double attained, double est) {
    if (attained <= 0.0) return 1.0 / est;
    const double m = truncated_mean_memo(est / attained);
    return 1.0 / (est - attained * m);
}

}  // namespace estq
