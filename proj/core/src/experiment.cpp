#include "estq/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "estq/gittins.hpp"
#include "estq/metrics.hpp"
#include "estq/rng.hpp"
#include "estq/version.hpp"

namespace estq {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::vector<double> kKSweep{0.25, 0.375, 0.5, 0.75, 1.0, 2.0};
const std::vector<double> kSigmaSweep{0.25, 0.375, 0.5, 0.75, 1.0};
const std::vector<double> kRhoSweep{0.5, 0.55, 0.6, 0.65, 0.7, 0.75,
                                    0.8, 0.85, 0.9, 0.95, 0.99};

const std::vector<FigureSpec>& figures() {
    static const std::vector<FigureSpec> specs = [] {
        std::vector<FigureSpec> f;
        f.push_back({"fig2_k_sweep", "k",
                     "normalized MST vs Weibull shape k (sigma=0.5, rho=0.9)",
                     {"SRPT", "GITTINS", "SEH", "SERPT", "SEPT"},
                     kKSweep,
                     {0.5},
                     {0.9},
                     false});
        f.push_back({"fig3_sigma_sweep", "sigma",
                     "normalized MST vs error sigma (k=0.25, rho=0.9)",
                     {"SRPT", "GITTINS", "SEH", "SERPT", "SEPT"},
                     {0.25},
                     kSigmaSweep,
                     {0.9},
                     false});
        f.push_back({"fig4_rho_sweep", "rho",
                     "normalized MST vs load, with per-class columns (k=0.25, sigma=0.5)",
                     {"SRPT", "GITTINS", "SEH", "SERPT", "SEPT"},
                     {0.25},
                     {0.5},
                     kRhoSweep,
                     false});
        f.push_back({"fig5_slowdown_k", "k",
                     "mean slowdown vs Weibull shape k (sigma=0.5, rho=0.9; SERPT is "
                     "off-scale at small k and omitted)",
                     {"SRPT", "GITTINS", "SEH", "SEPT"},
                     kKSweep,
                     {0.5},
                     {0.9},
                     false});
        f.push_back({"table2", "sigma",
                     "normalized MST and mean slowdown at sigma in {1,2} (k=0.25, rho=0.9)",
                     {"SRPT", "GITTINS", "SEH", "SEPT", "LAS"},
                     {0.25},
                     {1.0, 2.0},
                     {0.9},
                     false});
        f.push_back({"fig6_trace_mst", "sigma",
                     "trace replay: normalized MST vs error sigma (rho=0.9)",
                     {"SRPT", "GITTINS", "SEH", "SERPT", "SEPT"},
                     {},
                     kSigmaSweep,
                     {0.9},
                     true});
        f.push_back({"fig7_trace_slowdown", "sigma",
                     "trace replay: mean slowdown vs error sigma (rho=0.9)",
                     {"SRPT", "GITTINS", "SEH", "SEPT"},
                     {},
                     kSigmaSweep,
                     {0.9},
                     true});
        return f;
    }();
    return specs;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt_hex(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

bool is_trace_plan(const ExperimentPlan& plan) {
    if (plan.figure) {
        const FigureSpec* f = find_figure(*plan.figure);
        if (f) return f->needs_trace;
    }
    return plan.trace_path.has_value();
}

}  // namespace

std::span<const FigureSpec> figure_catalog() { return figures(); }

const FigureSpec* find_figure(const std::string& id) {
    for (const auto& f : figures()) {
        if (f.id == id) return &f;
    }
    return nullptr;
}

ExperimentPlan resolve_plan(const ExperimentPlan& plan) {
    ExperimentPlan r = plan;
    if (plan.figure) {
        const FigureSpec* f = find_figure(*plan.figure);
        if (f) {
            r.name = f->id;
            r.policies = f->policies;
            r.k_values = f->k_values;
            r.sigma_values = f->sigma_values;
            r.rho_values = f->rho_values;
        }
    }
    if (r.jobs <= 0) {
        r.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    return r;
}

std::vector<std::string> validate_plan(const ExperimentPlan& plan) {
    std::vector<std::string> errors;
    const ExperimentPlan r = resolve_plan(plan);

    if (plan.figure && find_figure(*plan.figure) == nullptr) {
        std::string ids;
        for (const auto& f : figures()) ids += std::string(ids.empty() ? "" : ", ") + f.id;
        errors.push_back("figure: unknown id '" + *plan.figure + "' (available: " + ids + ")");
        return errors;
    }
    if (r.policies.empty()) errors.push_back("policies: at least one policy is required");
    for (const auto& p : r.policies) {
        if (!policy_by_name(p)) {
            errors.push_back("policy: unknown policy '" + p + "' (did you mean " +
                             suggest_policy_name(p) + "?)");
        }
    }
    const bool trace = is_trace_plan(r);
    if (!trace) {
        if (r.k_values.empty()) errors.push_back("k: at least one value is required");
        for (double k : r.k_values) {
            if (!(k > 0.0)) errors.push_back("k: must be > 0 (got " + fmt(k) + ")");
        }
    }
    for (double s : r.sigma_values) {
        if (s < 0.0) errors.push_back("sigma: must be >= 0 (got " + fmt(s) + ")");
    }
    if (r.sigma_values.empty()) errors.push_back("sigma: at least one value is required");
    for (double rho : r.rho_values) {
        if (!(rho > 0.0 && rho < 1.0)) {
            errors.push_back("rho: must be in (0,1) (got " + fmt(rho) + ")");
        }
    }
    if (r.rho_values.empty()) errors.push_back("rho: at least one value is required");
    if (r.horizon < 1) errors.push_back("horizon: must be >= 1");
    if (r.min_runs < 2) errors.push_back("min_runs: must be >= 2");
    if (r.max_runs < r.min_runs) errors.push_back("max_runs: must be >= min_runs");
    if (!(r.ci_rel_width > 0.0)) errors.push_back("ci_rel_width: must be > 0");
    if (r.trace_speed < 0.0) errors.push_back("speed: must be >= 0");
    if (trace) {
        if (!r.trace_path) {
            errors.push_back("trace: this plan replays a trace and requires --trace PATH");
        } else if (!std::filesystem::exists(*r.trace_path)) {
            errors.push_back("trace: file not found: " + *r.trace_path);
        }
    }
    if (r.seh_hedge <= 0.0) errors.push_back("seh_hedge: must be > 0");
    return errors;
}

PlanRun execute_plan(const ExperimentPlan& plan, std::ostream* progress) {
    PlanRun out;
    out.resolved = resolve_plan(plan);
    const ExperimentPlan& r = out.resolved;
    {
        const auto errors = validate_plan(r);
        if (!errors.empty()) {
            std::string msg = "invalid plan:";
            for (const auto& e : errors) msg += "\n  " + e;
            throw std::invalid_argument(msg);
        }
    }

    const bool trace = is_trace_plan(r);
    std::shared_ptr<const TraceData> trace_data;
    if (trace) {
        trace_data = std::make_shared<TraceData>(ingest_trace(*r.trace_path, r.trace_speed));
    }
    const std::vector<double> k_axis = trace ? std::vector<double>{-1.0} : r.k_values;

    for (double k : k_axis) {
        for (double sigma : r.sigma_values) {
            for (double rho : r.rho_values) {
                // one scenario = one workload; seeds shared across policies
                const ErrorModel err = ErrorModel::log_normal(sigma, r.error_mu);
                WorkloadSpec workload =
                    trace ? WorkloadSpec::from_trace(trace_data, err, rho)
                          : WorkloadSpec::synthetic(SizeDistribution::weibull_unit_mean(k),
                                                    err, rho);
                ReplicationControls controls;
                controls.min_runs = r.min_runs;
                controls.max_runs = r.max_runs;
                controls.max_rel_full_width = r.ci_rel_width;
                controls.workers = r.jobs;
                controls.paired_seeds = r.paired_seeds;
                controls.horizon = r.horizon;
                controls.seed_base = combine_seed(
                    combine_seed(combine_seed(r.seed_base, hash_double(k)),
                                 hash_double(sigma)),
                    hash_double(rho));

                for (const auto& pname : r.policies) {
                    PolicyParams params;
                    params.error = err;
                    params.seh_hedge = r.seh_hedge;
                    const Policy policy = *Policy::by_name(pname, params);
                    CellOutcome cell;
                    cell.key = ScenarioKey{pname, k, sigma, rho};
                    cell.result = replicate_until_converged(workload, policy, controls);
                    if (!cell.result.converged) ++out.unconverged;
                    if (progress) {
                        (*progress) << "cell policy=" << pname << " k=" << fmt(k)
                                    << " sigma=" << fmt(sigma) << " rho=" << fmt(rho)
                                    << " runs=" << cell.result.n_runs
                                    << (cell.result.converged ? "" : " UNCONVERGED")
                                    << " mst=" << fmt(cell.result.mst.point) << '\n';
                    }
                    out.cells.push_back(std::move(cell));
                }
            }
        }
    }
    return out;
}

const char* kCsvHeader =
    "figure,policy,k,sigma,rho,horizon,n_runs,converged,mst,mst_ci_width,"
    "mst_ratio_vs_srpt,mean_slowdown,slowdown_ci_width,slowdown_ratio_vs_srpt,"
    "mst_over,mst_under,mst_over_ratio,mst_under_ratio,mst_over_ratio_class,"
    "mst_under_ratio_class,seeds_digest";

std::string plan_csv(const PlanRun& run) {
    // SRPT cell per scenario, for normalization
    std::map<std::tuple<double, double, double>, const CellOutcome*> srpt;
    for (const auto& c : run.cells) {
        if (c.key.policy == "SRPT") {
            srpt[{c.key.k, c.key.sigma, c.key.rho}] = &c;
        }
    }
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const auto& c : run.cells) {
        const CellOutcome* base = nullptr;
        if (auto it = srpt.find({c.key.k, c.key.sigma, c.key.rho}); it != srpt.end()) {
            base = it->second;
        }
        const auto ratio = [&](double tgt, double ref) -> std::string {
            if (base == nullptr || ref == 0.0) return "";
            return fmt(normalize_against_baseline(tgt, ref));
        };
        const auto& res = c.result;
        os << run.resolved.name << ',' << c.key.policy << ','
           << (c.key.k < 0.0 ? "" : fmt(c.key.k)) << ',' << fmt(c.key.sigma) << ','
           << fmt(c.key.rho) << ',' << run.resolved.horizon << ',' << res.n_runs << ','
           << (res.converged ? 1 : 0) << ',' << fmt(res.mst.point) << ','
           << fmt(2.0 * res.mst.ci_half_width) << ','
           << ratio(res.mst.point, base ? base->result.mst.point : 0.0) << ','
           << fmt(res.slowdown.point) << ',' << fmt(2.0 * res.slowdown.ci_half_width) << ','
           << ratio(res.slowdown.point, base ? base->result.slowdown.point : 0.0) << ','
           << (res.mst_over.n_runs > 0 ? fmt(res.mst_over.point) : "") << ','
           << (res.mst_under.n_runs > 0 ? fmt(res.mst_under.point) : "") << ','
           << ratio(res.mst_over.point, base ? base->result.mst.point : 0.0) << ','
           << ratio(res.mst_under.point, base ? base->result.mst.point : 0.0) << ','
           << ratio(res.mst_over.point, base ? base->result.mst_over.point : 0.0) << ','
           << ratio(res.mst_under.point, base ? base->result.mst_under.point : 0.0) << ','
           << fmt_hex(res.seeds_digest) << '\n';
    }
    return os.str();
}

namespace {

ordered_json plan_json_obj(const ExperimentPlan& p) {
    ordered_json j;
    j["name"] = p.name;
    if (p.figure) j["figure"] = *p.figure;
    j["policies"] = p.policies;
    j["k"] = p.k_values;
    j["sigma"] = p.sigma_values;
    j["rho"] = p.rho_values;
    j["horizon"] = p.horizon;
    j["min_runs"] = p.min_runs;
    j["max_runs"] = p.max_runs;
    j["ci_rel_width"] = p.ci_rel_width;
    j["seed_base"] = p.seed_base;
    j["paired_seeds"] = p.paired_seeds;
    j["jobs"] = p.jobs;
    j["out_dir"] = p.out_dir;
    if (p.trace_path) j["trace"] = *p.trace_path;
    j["speed"] = p.trace_speed;
    j["error_mu"] = p.error_mu;
    j["seh_hedge"] = p.seh_hedge;
    return j;
}

ExperimentPlan plan_from_json_obj(const ordered_json& j) {
    ExperimentPlan p;
    if (j.contains("name")) p.name = j["name"].get<std::string>();
    if (j.contains("figure")) p.figure = j["figure"].get<std::string>();
    if (j.contains("policies")) p.policies = j["policies"].get<std::vector<std::string>>();
    if (j.contains("k")) p.k_values = j["k"].get<std::vector<double>>();
    if (j.contains("sigma")) p.sigma_values = j["sigma"].get<std::vector<double>>();
    if (j.contains("rho")) p.rho_values = j["rho"].get<std::vector<double>>();
    if (j.contains("horizon")) p.horizon = j["horizon"].get<std::uint64_t>();
    if (j.contains("min_runs")) p.min_runs = j["min_runs"].get<int>();
    if (j.contains("max_runs")) p.max_runs = j["max_runs"].get<int>();
    if (j.contains("ci_rel_width")) p.ci_rel_width = j["ci_rel_width"].get<double>();
    if (j.contains("seed_base")) p.seed_base = j["seed_base"].get<std::uint64_t>();
    if (j.contains("paired_seeds")) p.paired_seeds = j["paired_seeds"].get<bool>();
    if (j.contains("jobs")) p.jobs = j["jobs"].get<int>();
    if (j.contains("out_dir")) p.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("trace")) p.trace_path = j["trace"].get<std::string>();
    if (j.contains("speed")) p.trace_speed = j["speed"].get<double>();
    if (j.contains("error_mu")) p.error_mu = j["error_mu"].get<double>();
    if (j.contains("seh_hedge")) p.seh_hedge = j["seh_hedge"].get<double>();
    return p;
}

}  // namespace

std::string plan_to_json(const ExperimentPlan& plan) {
    return plan_json_obj(plan).dump(2) + "\n";
}

ExperimentPlan plan_from_json_text(const std::string& text) {
    return plan_from_json_obj(ordered_json::parse(text));
}

ExperimentPlan plan_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("plan: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return plan_from_json_text(ss.str());
}

ExperimentPlan plan_from_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("manifest: cannot open " + path);
    ordered_json j = ordered_json::parse(in);
    if (!j.contains("plan")) throw std::runtime_error("manifest: missing plan object");
    return plan_from_json_obj(j["plan"]);
}

PlanOutcome run_plan(const ExperimentPlan& plan, std::ostream* progress) {
    const auto t0 = std::chrono::steady_clock::now();
    PlanRun run = execute_plan(plan, progress);
    const ExperimentPlan& r = run.resolved;

    std::filesystem::create_directories(r.out_dir);
    PlanOutcome out;
    out.unconverged = run.unconverged;
    out.csv_path = (std::filesystem::path(r.out_dir) / (r.name + ".csv")).string();
    out.manifest_path =
        (std::filesystem::path(r.out_dir) / (r.name + ".manifest.json")).string();

    {
        std::ofstream csv(out.csv_path, std::ios::binary);
        if (!csv) throw std::runtime_error("run_plan: cannot write " + out.csv_path);
        csv << plan_csv(run);
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ordered_json manifest;
    manifest["tool"] = "estq";
    manifest["version"] = kVersion;
    manifest["plan"] = plan_json_obj(plan);
    manifest["resolved"] = plan_json_obj(r);
    manifest["outputs"] = {{"csv", out.csv_path}};
    ordered_json cells = ordered_json::array();
    for (const auto& c : run.cells) {
        ordered_json jc;
        jc["policy"] = c.key.policy;
        if (c.key.k >= 0.0) jc["k"] = c.key.k;
        jc["sigma"] = c.key.sigma;
        jc["rho"] = c.key.rho;
        jc["n_runs"] = c.result.n_runs;
        jc["converged"] = c.result.converged;
        jc["seeds_digest"] = fmt_hex(c.result.seeds_digest);
        cells.push_back(jc);
    }
    manifest["cells"] = cells;
    manifest["wall_time_seconds"] = wall;
    manifest["created_at_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    {
        std::ofstream mf(out.manifest_path, std::ios::binary);
        if (!mf) throw std::runtime_error("run_plan: cannot write " + out.manifest_path);
        mf << manifest.dump(2) << '\n';
    }
    return out;
}

std::vector<ScoreCurvePoint> score_curve(const std::string& policy_name, double est_size,
                                         double a_max, int points, const PolicyParams& params,
                                         bool include_variants) {
    if (points < 2) throw std::invalid_argument("score_curve: points must be >= 2");
    if (!(est_size > 0.0) || !(a_max > 0.0)) {
        throw std::invalid_argument("score_curve: est_size and a_max must be > 0");
    }
    const auto id = policy_by_name(policy_name);
    if (!id) throw std::invalid_argument("score_curve: unknown policy " + policy_name);
    if (*id == PolicyId::Las || *id == PolicyId::Fcfs) {
        throw std::invalid_argument("score_curve: " + policy_name + " is not score-based");
    }
    Policy policy = Policy::make(*id, params);
    std::vector<ScoreCurvePoint> out;
    out.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        ScoreCurvePoint p;
        p.attained = a_max * static_cast<double>(i) / static_cast<double>(points - 1);
        if (*id == PolicyId::Srpt && p.attained >= est_size) break;  // job has departed
        const Score s = policy.score(p.attained, est_size, est_size);
        p.is_top = s.is_top();
        p.score = s.is_top() ? 0.0 : s.value();
        if (include_variants && *id == PolicyId::Gittins) {
            const auto v = gittins_score_variants(p.attained, est_size, params.error);
            p.gittins_cdf_ratio_normal = v.cdf_ratio_normal;
            p.gittins_cdf_ratio_lognormal = v.cdf_ratio_lognormal;
        }
        out.push_back(p);
    }
    return out;
}

std::string score_curve_csv(std::span<const ScoreCurvePoint> points, bool include_variants) {
    std::ostringstream os;
    os << "attained,score";
    if (include_variants) os << ",score_cdf_ratio_normal,score_cdf_ratio_lognormal";
    os << '\n';
    for (const auto& p : points) {
        os << fmt(p.attained) << ',' << (p.is_top ? "inf" : fmt(p.score));
        if (include_variants) {
            os << ',' << fmt(p.gittins_cdf_ratio_normal) << ','
               << fmt(p.gittins_cdf_ratio_lognormal);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace estq
