// estq — command-line front end for the M/G/1 estimated-size scheduling
// simulator. Subcommands: run, validate, list-figures, score.
//
// Exit codes: 0 success, 1 usage or validation error, 2 partial success
// (some cells unconverged at max-runs), 3 runtime failure.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "estq/experiment.hpp"
#include "estq/version.hpp"

namespace {

struct PlanFlags {
    std::string plan_file;
    std::string manifest_file;
    std::string figure;
    std::vector<std::string> policies;
    std::vector<double> k_values;
    std::vector<double> sigma_values;
    std::vector<double> rho_values;
    std::uint64_t horizon = 10000;
    std::uint64_t seed = 1;
    int max_runs = 2000;
    int min_runs = 30;
    double ci_rel_width = 0.05;
    int jobs = 0;
    bool paired = true;
    bool independent = false;
    std::string trace;
    double speed = 0.0;
    std::string out_dir = "out";
    double seh_hedge = 2.0;
    double error_mu = 0.0;
};

void add_plan_flags(CLI::App* cmd, PlanFlags& f) {
    cmd->add_option("--plan", f.plan_file, "plan file (JSON); flags override its values")
        ->envname("ESTQ_PLAN");
    cmd->add_option("--manifest", f.manifest_file,
                    "replay the plan recorded in a manifest file");
    cmd->add_option("--figure", f.figure,
                    "built-in figure plan id (see list-figures)")
        ->envname("ESTQ_FIGURE");
    cmd->add_option("--policy", f.policies, "policy name, repeatable");
    cmd->add_option("--k", f.k_values, "Weibull shape value, repeatable");
    cmd->add_option("--sigma", f.sigma_values, "error sigma value, repeatable");
    cmd->add_option("--rho", f.rho_values, "offered load value, repeatable");
    cmd->add_option("--horizon", f.horizon, "tracked arrivals per run")
        ->envname("ESTQ_HORIZON");
    cmd->add_option("--seed", f.seed, "base seed")->envname("ESTQ_SEED");
    cmd->add_option("--max-runs", f.max_runs, "replication cap per cell")
        ->envname("ESTQ_MAX_RUNS");
    cmd->add_option("--min-runs", f.min_runs, "minimum replications per cell")
        ->envname("ESTQ_MIN_RUNS");
    cmd->add_option("--ci-width", f.ci_rel_width,
                    "stop when the 95% CI full width is within this fraction of the mean")
        ->envname("ESTQ_CI_WIDTH");
    cmd->add_option("--jobs", f.jobs, "worker threads (0 = hardware)")
        ->envname("ESTQ_JOBS");
    cmd->add_flag("--paired-seeds,!--independent-seeds", f.paired,
                  "share workload seeds across policies within a scenario (default on)");
    cmd->add_option("--trace", f.trace, "trace CSV (job_index,size_bytes)")
        ->envname("ESTQ_TRACE");
    cmd->add_option("--speed", f.speed,
                    "trace processing speed in bytes per time unit (0 = mean bytes)")
        ->envname("ESTQ_SPEED");
    cmd->add_option("--out", f.out_dir, "output directory")->envname("ESTQ_OUT");
    cmd->add_option("--seh-hedge", f.seh_hedge, "SEH frozen-branch constant (default 2)");
    cmd->add_option("--error-mu", f.error_mu, "log-scale location of the error model");
}

estq::ExperimentPlan merge_plan(const CLI::App* cmd, const PlanFlags& f) {
    estq::ExperimentPlan plan;
    if (!f.manifest_file.empty()) {
        plan = estq::plan_from_manifest_file(f.manifest_file);
    } else if (!f.plan_file.empty()) {
        plan = estq::plan_from_json_file(f.plan_file);
    }
    const auto set = [&](const char* name) { return cmd->count(name) > 0; };
    if (set("--figure")) plan.figure = f.figure;
    if (set("--policy")) plan.policies = f.policies;
    if (set("--k")) plan.k_values = f.k_values;
    if (set("--sigma")) plan.sigma_values = f.sigma_values;
    if (set("--rho")) plan.rho_values = f.rho_values;
    if (set("--horizon")) plan.horizon = f.horizon;
    if (set("--seed")) plan.seed_base = f.seed;
    if (set("--max-runs")) plan.max_runs = f.max_runs;
    if (set("--min-runs")) plan.min_runs = f.min_runs;
    if (set("--ci-width")) plan.ci_rel_width = f.ci_rel_width;
    if (set("--jobs")) plan.jobs = f.jobs;
    if (set("--paired-seeds") || set("--independent-seeds")) plan.paired_seeds = f.paired;
    if (set("--trace")) plan.trace_path = f.trace;
    if (set("--speed")) plan.trace_speed = f.speed;
    if (set("--out")) plan.out_dir = f.out_dir;
    if (set("--seh-hedge")) plan.seh_hedge = f.seh_hedge;
    if (set("--error-mu")) plan.error_mu = f.error_mu;
    return plan;
}

int do_validate(const estq::ExperimentPlan& plan) {
    const auto errors = estq::validate_plan(plan);
    if (errors.empty()) {
        std::cout << "ok\n";
        return 0;
    }
    for (const auto& e : errors) std::cerr << "error: " << e << '\n';
    return 1;
}

int do_run(const estq::ExperimentPlan& plan) {
    const auto errors = estq::validate_plan(plan);
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "error: " << e << '\n';
        return 1;
    }
    const auto outcome = estq::run_plan(plan, &std::cerr);
    std::cout << outcome.csv_path << '\n';
    if (outcome.unconverged > 0) {
        std::cerr << "warning: " << outcome.unconverged
                  << " cell(s) hit max-runs before the CI width rule was met\n";
        return 2;
    }
    return 0;
}

int do_list_figures() {
    for (const auto& f : estq::figure_catalog()) {
        std::cout << f.id << "\t(sweeps " << f.swept << ")\t" << f.description << "\n\t"
                  << "policies:";
        for (const auto& p : f.policies) std::cout << ' ' << p;
        std::cout << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"estq: preemptive single-server scheduling under estimated processing times"};
    app.set_version_flag("--version", std::string("estq ") + estq::kVersion);
    app.require_subcommand(1);

    PlanFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "run an experiment plan, write CSV + manifest");
    add_plan_flags(run_cmd, run_flags);

    PlanFlags validate_flags;
    auto* validate_cmd = app.add_subcommand("validate", "validate a plan without running it");
    add_plan_flags(validate_cmd, validate_flags);

    auto* list_cmd = app.add_subcommand("list-figures", "list built-in figure plans");

    auto* score_cmd =
        app.add_subcommand("score", "print a policy's score curve for a given estimate");
    std::string score_policy = "SEH";
    double score_est = 20.0;
    double score_sigma = 0.5;
    double score_mu = 0.0;
    double score_hedge = 2.0;
    double score_amax = 0.0;
    int score_points = 201;
    bool score_alt = false;
    std::string score_out;
    score_cmd->add_option("--policy", score_policy, "score-based policy name")->required();
    score_cmd->add_option("--est", score_est, "estimated processing time")->required();
    score_cmd->add_option("--sigma", score_sigma, "error sigma (GITTINS)");
    score_cmd->add_option("--error-mu", score_mu, "error log-scale location");
    score_cmd->add_option("--seh-hedge", score_hedge, "SEH frozen-branch constant");
    score_cmd->add_option("--amax", score_amax,
                          "largest attained service on the curve (default 5*est)");
    score_cmd->add_option("--points", score_points, "grid points");
    score_cmd->add_flag("--alt-form", score_alt,
                        "GITTINS: also print the published CDF-ratio closed forms");
    score_cmd->add_option("--out", score_out, "write CSV here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return do_run(merge_plan(run_cmd, run_flags));
        if (validate_cmd->parsed()) return do_validate(merge_plan(validate_cmd, validate_flags));
        if (list_cmd->parsed()) return do_list_figures();
        if (score_cmd->parsed()) {
            estq::PolicyParams params;
            params.error = estq::ErrorModel::log_normal(score_sigma, score_mu);
            params.seh_hedge = score_hedge;
            const double amax = score_amax > 0.0 ? score_amax : 5.0 * score_est;
            const auto curve = estq::score_curve(score_policy, score_est, amax, score_points,
                                                 params, score_alt);
            const std::string csv = estq::score_curve_csv(curve, score_alt);
            if (score_out.empty()) {
                std::cout << csv;
            } else {
                std::ofstream out(score_out, std::ios::binary);
                if (!out) throw std::runtime_error("cannot write " + score_out);
                out << csv;
                std::cout << score_out << '\n';
            }
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
