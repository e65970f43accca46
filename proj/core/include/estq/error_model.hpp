#pragma once

#include <cmath>
#include <stdexcept>

#include "estq/normal.hpp"

namespace estq {

// Multiplicative estimation error X: a job with processing time s gets the
// estimate s * X. Log-normal on the log scale, so over- and underestimation
// are equally likely when mu == 0. sigma == 0 is the degenerate
// exact-estimates mode (X identically e^mu).
struct ErrorModel {
    double mu = 0.0;
    double sigma = 0.5;

    static ErrorModel log_normal(double sigma, double mu = 0.0) {
        if (sigma < 0.0) throw std::invalid_argument("ErrorModel: sigma must be >= 0");
        return ErrorModel{mu, sigma};
    }
    static ErrorModel exact() { return ErrorModel{0.0, 0.0}; }

    bool degenerate() const { return sigma == 0.0; }
    double mean() const { return std::exp(mu + 0.5 * sigma * sigma); }
    double median() const { return std::exp(mu); }
    // support: (0, inf) for sigma > 0
    double support_lower() const { return 0.0; }

    double sample(double u_open) const {
        if (degenerate()) return std::exp(mu);
        return std::exp(mu + sigma * norm_ppf(u_open));
    }

    double cdf(double x) const {
        if (x <= 0.0) return 0.0;
        if (degenerate()) return x >= std::exp(mu) ? 1.0 : 0.0;
        return norm_cdf((std::log(x) - mu) / sigma);
    }

    double pdf(double x) const {
        if (x <= 0.0 || degenerate()) return 0.0;
        const double z = (std::log(x) - mu) / sigma;
        return norm_pdf(z) / (x * sigma);
    }
};

}  // namespace estq
