#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "estq/error_model.hpp"
#include "estq/gittins.hpp"
#include "estq/score.hpp"

namespace estq {

// Score functions. Higher score = higher priority; the served job's score
// never falls below the frozen scores of waiting jobs between decision
// epochs, so re-selection at arrivals and departures suffices.

// 1/(s - a); requires a < s — a job at a == s has departed.
double score_srpt(double attained, double true_size);

// 1/(est - a) while est > a, top() once the estimate is exhausted: the job
// is presumed nearly done and blocks everything else until it completes.
Score score_serpt(double attained, double est_size);

// 1/est, never updated.
double score_sept(double est_size);

// Rising branch 1/(est - a(1 - a/(hedge*est))) for a < est, frozen at
// hedge/est once attained service reaches the estimate. Continuous at
// a == est for any hedge; hedge = 2 is the published policy.
double score_seh(double attained, double est_size, double hedge = 2.0);

enum class PolicyId { Srpt, Serpt, Sept, Seh, Gittins, Las, Fcfs };

enum class Discipline {
    ScoreBased,     // serve the argmax score, preemptive
    LeastAttained,  // serve the minimal-attained set, processor sharing
    Fifo,           // arrival order, effectively non-preemptive
};

struct PolicyInfo {
    PolicyId id;
    const char* name;  // stable CLI/CSV vocabulary
    Discipline discipline;
    bool requires_true_size;
    bool requires_estimate;
};

std::span<const PolicyInfo> policy_catalog();
const PolicyInfo& policy_info(PolicyId id);
std::optional<PolicyId> policy_by_name(std::string_view name);
// nearest catalog name by edit distance, for error messages
std::string suggest_policy_name(std::string_view name);

struct PolicyParams {
    ErrorModel error{};       // GITTINS only
    double seh_hedge = 2.0;   // SEH frozen-branch constant
};

// A scheduling policy as a value. Copy per run; the Gittins scorer keeps a
// per-instance memo and must not be shared across threads.
class Policy {
public:
    static Policy make(PolicyId id, PolicyParams params = {});
    static std::optional<Policy> by_name(std::string_view name, PolicyParams params = {});

    Policy(const Policy& other);
    Policy& operator=(const Policy& other);
    Policy(Policy&&) noexcept = default;
    Policy& operator=(Policy&&) noexcept = default;

    PolicyId id() const { return info_->id; }
    const char* name() const { return info_->name; }
    Discipline discipline() const { return info_->discipline; }
    bool requires_true_size() const { return info_->requires_true_size; }
    bool requires_estimate() const { return info_->requires_estimate; }
    const PolicyParams& params() const { return params_; }

    // Score of one job under a ScoreBased discipline. LAS and FCFS do not
    // consult scores.
    Score score(double attained, double true_size, double est_size) const;

private:
    Policy(const PolicyInfo* info, PolicyParams params);

    const PolicyInfo* info_;
    PolicyParams params_;
    mutable std::unique_ptr<GittinsScorer> gittins_;  // Gittins only
};

}  // namespace estq
