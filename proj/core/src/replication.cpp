#include "estq/replication.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "estq/rng.hpp"

namespace estq {

namespace {

// index-parallel for with deterministic result placement
template <class Fn>
void parallel_indexed(int first, int last, int workers, const Fn& fn) {
    const int count = last - first;
    if (count <= 0) return;
    const int n_threads = std::max(1, std::min(workers, count));
    if (n_threads == 1) {
        for (int i = first; i < last; ++i) fn(i);
        return;
    }
    std::atomic<int> cursor{first};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const int i = cursor.fetch_add(1);
                if (i >= last) return;
                try {
                    fn(i);
                } catch (...) {
                    std::scoped_lock lk(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

MetricSummary summarize(std::span<const double> xs, double max_rel_full_width, int min_runs) {
    MetricSummary m;
    std::vector<double> clean;
    clean.reserve(xs.size());
    for (double x : xs) {
        if (std::isfinite(x)) clean.push_back(x);
    }
    const auto ci = mean_ci95(clean);
    m.point = ci.mean;
    m.ci_half_width = ci.half_width;
    m.n_runs = static_cast<int>(clean.size());
    m.converged = m.n_runs >= min_runs && ci.rel_full_width() <= max_rel_full_width;
    return m;
}

}  // namespace

std::uint64_t run_seed(std::uint64_t seed_base, bool paired, const char* policy_name,
                       int run_index) {
    std::uint64_t s = seed_base;
    if (!paired) s = combine_seed(s, fnv1a64(std::string_view(policy_name)));
    return combine_seed(s, static_cast<std::uint64_t>(run_index));
}

CellResult replicate_until_converged(const WorkloadSpec& workload, const Policy& policy,
                                     const ReplicationControls& controls) {
    if (controls.min_runs < 2) throw std::invalid_argument("replication: min_runs must be >= 2");
    if (controls.max_runs < controls.min_runs) {
        throw std::invalid_argument("replication: max_runs < min_runs");
    }

    CellResult out;
    std::vector<double> over, under;

    int target = controls.min_runs;
    while (true) {
        const int first = out.n_runs;
        out.seeds.resize(static_cast<std::size_t>(target));
        out.per_run_mst.resize(static_cast<std::size_t>(target));
        out.per_run_slowdown.resize(static_cast<std::size_t>(target));
        over.resize(static_cast<std::size_t>(target));
        under.resize(static_cast<std::size_t>(target));

        parallel_indexed(first, target, controls.workers, [&](int i) {
            const std::uint64_t seed =
                run_seed(controls.seed_base, controls.paired_seeds, policy.name(), i);
            Policy local = policy;  // fresh per-run scorer state
            EngineOptions opts;
            opts.stop_rule = controls.stop_rule;
            const RunResult r = run_simulation(workload, local, controls.horizon, seed, opts);
            out.seeds[static_cast<std::size_t>(i)] = seed;
            out.per_run_mst[static_cast<std::size_t>(i)] = r.agg.mst;
            out.per_run_slowdown[static_cast<std::size_t>(i)] = r.agg.mean_slowdown;
            over[static_cast<std::size_t>(i)] =
                r.agg.mst_over.value_or(std::nan(""));
            under[static_cast<std::size_t>(i)] =
                r.agg.mst_under.value_or(std::nan(""));
        });
        out.n_runs = target;

        out.mst = summarize(out.per_run_mst, controls.max_rel_full_width, controls.min_runs);
        if (out.mst.converged || target >= controls.max_runs) break;
        target = std::min(controls.max_runs, target + std::max(10, target / 2));
    }

    out.slowdown = summarize(out.per_run_slowdown, controls.max_rel_full_width, controls.min_runs);
    out.mst_over = summarize(over, controls.max_rel_full_width, controls.min_runs);
    out.mst_under = summarize(under, controls.max_rel_full_width, controls.min_runs);
    out.converged = out.mst.converged;
    out.seeds_digest = fnv1a64(std::span<const std::uint64_t>(out.seeds));
    return out;
}

}  // namespace estq
