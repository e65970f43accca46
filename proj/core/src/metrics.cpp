#include "estq/metrics.hpp"

#include <stdexcept>

namespace estq {

Aggregates aggregate(std::span<const JobRecord> records) {
    if (records.empty()) throw std::invalid_argument("aggregate: no records");
    Aggregates a;
    double sum_sojourn = 0.0, sum_slowdown = 0.0;
    double sum_over = 0.0, sum_under = 0.0;
    for (const auto& r : records) {
        if (!r.completed()) throw std::invalid_argument("aggregate: incomplete record");
        const double sj = r.sojourn();
        sum_sojourn += sj;
        sum_slowdown += r.slowdown();
        if (r.overestimated()) {
            sum_over += sj;
            ++a.n_over;
        } else {
            sum_under += sj;
            ++a.n_under;
        }
    }
    a.n = records.size();
    a.mst = sum_sojourn / static_cast<double>(a.n);
    a.mean_slowdown = sum_slowdown / static_cast<double>(a.n);
    if (a.n_over > 0) a.mst_over = sum_over / static_cast<double>(a.n_over);
    if (a.n_under > 0) a.mst_under = sum_under / static_cast<double>(a.n_under);
    return a;
}

double normalize_against_baseline(double target_estimate, double baseline_estimate) {
    if (baseline_estimate == 0.0) {
        throw std::invalid_argument("normalize_against_baseline: baseline estimate is zero");
    }
    return target_estimate / baseline_estimate;
}

}  // namespace estq
