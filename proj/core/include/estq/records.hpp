#pragma once

#include <cstdint>
#include <optional>

namespace estq {

// Final per-job record. est_class: overestimated iff est_size >= true_size
// (X == 1 counts as overestimated).
struct JobRecord {
    std::uint32_t id = 0;
    double arrival = 0.0;
    double true_size = 0.0;
    double est_size = 0.0;
    std::optional<double> completion;

    bool completed() const { return completion.has_value(); }
    double sojourn() const { return *completion - arrival; }
    double slowdown() const { return sojourn() / true_size; }
    bool overestimated() const { return est_size >= true_size; }
};

struct RunStats {
    std::uint64_t total_arrivals = 0;   // all generated arrivals, tracked or not
    double end_time = 0.0;
    double busy_time = 0.0;
    double attained_delivered = 0.0;    // equals busy_time exactly
    double area_jobs_in_system = 0.0;   // integral of N(t) dt over [0, end_time]
    std::uint64_t decision_epochs = 0;
    std::size_t peak_in_system = 0;

    double time_average_in_system() const {
        return end_time > 0.0 ? area_jobs_in_system / end_time : 0.0;
    }
    double empirical_arrival_rate() const {
        return end_time > 0.0 ? static_cast<double>(total_arrivals) / end_time : 0.0;
    }
};

struct Aggregates {
    double mst = 0.0;
    double mean_slowdown = 0.0;
    std::optional<double> mst_over;    // absent when the class is empty
    std::optional<double> mst_under;
    std::uint64_t n = 0;
    std::uint64_t n_over = 0;
    std::uint64_t n_under = 0;
};

}  // namespace estq
