#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "estq/replication.hpp"

namespace estq {

// A parameter grid: every (policy, k, sigma, rho) cell is replicated under
// the same seed discipline. Defaults are the reference settings (k = 0.25,
// sigma = 0.5, rho = 0.9, horizon 10,000).
struct ExperimentPlan {
    std::string name = "adhoc";
    std::optional<std::string> figure;
    std::vector<std::string> policies;
    std::vector<double> k_values{0.25};
    std::vector<double> sigma_values{0.5};
    std::vector<double> rho_values{0.9};
    std::uint64_t horizon = 10000;
    int min_runs = 30;
    int max_runs = 2000;
    double ci_rel_width = 0.05;  // full CI width over point estimate
    std::uint64_t seed_base = 1;
    bool paired_seeds = true;
    int jobs = 0;  // worker threads; 0 = hardware concurrency
    std::string out_dir = "out";
    std::optional<std::string> trace_path;
    double trace_speed = 0.0;  // bytes per time unit; 0 = mean bytes (unit-mean sizes)
    double error_mu = 0.0;
    double seh_hedge = 2.0;
};

struct FigureSpec {
    std::string id;
    std::string swept;  // "k" | "sigma" | "rho"
    std::string description;
    std::vector<std::string> policies;
    std::vector<double> k_values;
    std::vector<double> sigma_values;
    std::vector<double> rho_values;
    bool needs_trace = false;
};

std::span<const FigureSpec> figure_catalog();
const FigureSpec* find_figure(const std::string& id);

// Grid resolved against the figure spec (if any); validation and execution
// run on the resolved plan.
ExperimentPlan resolve_plan(const ExperimentPlan& plan);

// Field-named messages; empty means the plan is runnable.
std::vector<std::string> validate_plan(const ExperimentPlan& plan);

struct ScenarioKey {
    std::string policy;
    double k = 0.25;   // < 0 for trace scenarios
    double sigma = 0.5;
    double rho = 0.9;
};

struct CellOutcome {
    ScenarioKey key;
    CellResult result;
};

struct PlanRun {
    ExperimentPlan resolved;
    std::vector<CellOutcome> cells;
    int unconverged = 0;
};

// Runs every cell (scenario-major, policies in plan order; replications may
// use worker threads, results merge deterministically).
PlanRun execute_plan(const ExperimentPlan& plan, std::ostream* progress = nullptr);

// CSV body for a finished plan; byte-stable for identical plans and seeds.
std::string plan_csv(const PlanRun& run);
extern const char* kCsvHeader;

struct PlanOutcome {
    std::string csv_path;
    std::string manifest_path;
    int unconverged = 0;
};

// execute + write <out_dir>/<name>.csv and <out_dir>/<name>.manifest.json
PlanOutcome run_plan(const ExperimentPlan& plan, std::ostream* progress = nullptr);

std::string plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json_text(const std::string& text);
ExperimentPlan plan_from_json_file(const std::string& path);
ExperimentPlan plan_from_manifest_file(const std::string& path);

// Score curve over attained service for one policy (the GITTINS variants
// include the alternative closed forms when requested).
struct ScoreCurvePoint {
    double attained = 0.0;
    bool is_top = false;
    double score = 0.0;
    double gittins_cdf_ratio_normal = 0.0;
    double gittins_cdf_ratio_lognormal = 0.0;
};

std::vector<ScoreCurvePoint> score_curve(const std::string& policy_name, double est_size,
                                         double a_max, int points, const PolicyParams& params,
                                         bool include_variants);
std::string score_curve_csv(std::span<const ScoreCurvePoint> points, bool include_variants);

}  // namespace estq
