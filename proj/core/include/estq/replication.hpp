#pragma once

#include <cstdint>
#include <vector>

#include "estq/engine.hpp"
#include "estq/stats.hpp"

namespace estq {

struct ReplicationControls {
    int min_runs = 30;   // never converge on fewer
    int max_runs = 2000;
    double max_rel_full_width = 0.05;  // 95% CI full width / point estimate
    int workers = 1;
    std::uint64_t seed_base = 1;
    bool paired_seeds = true;  // seeds independent of the policy identity
    std::uint64_t horizon = 10000;
    std::optional<StopRule> stop_rule;  // default: by workload source
};

struct MetricSummary {
    double point = 0.0;
    double ci_half_width = 0.0;  // Student-t, 95%
    int n_runs = 0;
    bool converged = false;

    double rel_full_width() const {
        return point != 0.0 ? 2.0 * ci_half_width / std::abs(point) : 0.0;
    }
};

struct CellResult {
    MetricSummary mst;       // the stopping rule applies to this metric
    MetricSummary slowdown;
    MetricSummary mst_over;   // over runs where the class is non-empty
    MetricSummary mst_under;
    int n_runs = 0;
    bool converged = false;
    std::vector<std::uint64_t> seeds;
    std::uint64_t seeds_digest = 0;
    std::vector<double> per_run_mst;
    std::vector<double> per_run_slowdown;
};

std::uint64_t run_seed(std::uint64_t seed_base, bool paired, const char* policy_name,
                       int run_index);

// Adds replications in growing batches (fresh seeds, results merged in seed
// order) until the MST confidence interval is within the width rule and at
// least min_runs replications ran, or max_runs is hit (converged == false).
CellResult replicate_until_converged(const WorkloadSpec& workload, const Policy& policy,
                                     const ReplicationControls& controls);

}  // namespace estq
