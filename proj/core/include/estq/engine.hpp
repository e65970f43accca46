#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "estq/policies.hpp"
#include "estq/records.hpp"
#include "estq/workload.hpp"

namespace estq {

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A job present in the system.
struct Job {
    std::uint32_t id = 0;  // arrival order, 1-based
    double arrival = 0.0;
    double true_size = 0.0;
    double est_size = 0.0;
    double attained = 0.0;
    double completion = -1.0;  // < 0 while incomplete
    bool tracked = false;

    bool completed() const { return completion >= 0.0; }
    double remaining() const { return true_size - attained; }
};

// Tie order at equal times: departures first, then LAS catch-ups, then
// arrivals; same-kind ties by job id.
enum class EventKind : int { Departure = 0, LasCatchUp = 1, Arrival = 2 };

struct EngineEvent {
    double time = 0.0;
    EventKind kind = EventKind::Arrival;
    std::uint32_t job_id = 0;  // 0 for LasCatchUp
};

struct Selection {
    bool processor_sharing = false;        // LAS share set
    std::vector<std::uint32_t> job_ids;    // ascending ids; single element otherwise
};

// Score policies: the job maximizing the score, ties by earlier arrival then
// lower id. LAS: every job within las_epsilon of the minimum attained
// service. FCFS: earliest arrival.
Selection select_job(std::span<const Job> queue, const Policy& policy,
                     double las_epsilon = 1e-9);

struct DecisionRecord {
    EngineEvent event;                    // the event that opened this epoch
    std::vector<std::uint32_t> selected;  // empty if the system went idle
    bool processor_sharing = false;
};

enum class StopRule {
    HorizonCompleted,  // run until the first `horizon` arrivals all complete
    LastArrival,       // run until the final workload job arrives (trace replay)
};

struct EngineOptions {
    std::optional<StopRule> stop_rule;  // default: by workload source
    bool record_decisions = false;
    bool self_check = false;  // O(n) work-balance assertions at every epoch
    double las_epsilon = 1e-9;
};

struct RunResult {
    std::string policy;
    std::uint64_t seed = 0;
    std::vector<JobRecord> records;  // tracked jobs, arrival order
    RunStats stats;
    Aggregates agg;  // over completed tracked jobs
    std::uint64_t completed_tracked = 0;
    std::vector<DecisionRecord> decisions;  // populated when record_decisions
};

using SampleFn = std::function<std::optional<JobSample>()>;

// Deterministic given (workload, policy, horizon, seed). Arrivals keep being
// generated past the horizon and contend for service until every tracked job
// completes (HorizonCompleted) or the last workload job arrives (LastArrival).
RunResult run_simulation(const WorkloadSpec& workload, const Policy& policy,
                         std::uint64_t horizon, std::uint64_t seed,
                         EngineOptions opts = {});

// Same engine over an explicit sample source (tests, scripted traffic).
RunResult run_simulation_samples(const SampleFn& next_sample, const Policy& policy,
                                 std::uint64_t horizon, StopRule stop_rule,
                                 EngineOptions opts = {}, std::string policy_name = {},
                                 std::uint64_t seed_label = 0);

}  // namespace estq
