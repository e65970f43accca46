#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace estq {

// Welford running mean/variance.
class SampleStats {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    std::int64_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double stddev() const;

private:
    std::int64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

double regularized_incomplete_beta(double a, double b, double x);

// Student-t CDF and upper-tail quantile (two-sided level supplied as the
// one-sided probability, e.g. 0.975 for a 95% interval).
double student_t_cdf(double t, int df);
double student_t_quantile(double p, int df);

struct ConfidenceInterval {
    double mean = 0.0;
    double half_width = 0.0;
    std::int64_t n = 0;
    // full width relative to the point estimate; infinite when mean == 0
    double rel_full_width() const;
};

ConfidenceInterval mean_ci95(std::span<const double> xs);

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64(std::span<const std::uint64_t> words);

}  // namespace estq
