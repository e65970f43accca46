#include "estq/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "estq/metrics.hpp"

namespace estq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool event_before(const EngineEvent& a, const EngineEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    return a.job_id < b.job_id;
}

// Shared selection logic over an index view of the queue. `active` is kept
// in arrival order, so id and arrival tie-breaks fall out of scan order.
template <class JobAt>
Selection select_impl(const JobAt& job_at, std::span<const std::uint32_t> active,
                      const Policy& policy, double las_epsilon) {
    Selection out;
    switch (policy.discipline()) {
        case Discipline::Fifo: {
            const Job& j = job_at(active.front());
            out.job_ids.push_back(j.id);
            return out;
        }
        case Discipline::ScoreBased: {
            const Job* best = nullptr;
            Score best_score = Score::finite(0.0);
            for (std::uint32_t idx : active) {
                const Job& j = job_at(idx);
                const Score s = policy.score(j.attained, j.true_size, j.est_size);
                if (best == nullptr || s > best_score ||
                    (s == best_score && (j.arrival < best->arrival ||
                                         (j.arrival == best->arrival && j.id < best->id)))) {
                    best = &j;
                    best_score = s;
                }
            }
            out.job_ids.push_back(best->id);
            return out;
        }
        case Discipline::LeastAttained: {
            double a_min = kInf;
            for (std::uint32_t idx : active) a_min = std::min(a_min, job_at(idx).attained);
            out.processor_sharing = true;
            for (std::uint32_t idx : active) {
                const Job& j = job_at(idx);
                if (j.attained <= a_min + las_epsilon) out.job_ids.push_back(j.id);
            }
            return out;
        }
    }
    throw std::logic_error("select_impl: unreachable discipline");
}

class Engine {
public:
    Engine(const SampleFn& next_sample, const Policy& policy, std::uint64_t horizon,
           StopRule rule, const EngineOptions& opts)
        : next_sample_(next_sample),
          policy_(policy),
          horizon_(horizon),
          rule_(rule),
          opts_(opts) {
        if (horizon_ < 1) throw EngineError("run_simulation: horizon must be >= 1");
        tracked_remaining_ = horizon_;
    }

    RunResult run() {
        draw_next_arrival();
        while (!done()) {
            if (active_.empty()) {
                if (!have_pending_) {
                    if (rule_ == StopRule::HorizonCompleted) {
                        throw EngineError(
                            "event queue underflow: tracked jobs remain but no pending events");
                    }
                    break;
                }
                clock_ = next_arrival_time_;  // idle gap, N(t) == 0
                apply_arrival();
                continue;
            }

            const Selection sel =
                select_impl([this](std::uint32_t idx) -> const Job& { return jobs_[idx]; },
                            active_, policy_, opts_.las_epsilon);
            ++stats_.decision_epochs;
            attach_selection(sel);

            const EngineEvent ev = next_event(sel);
            advance_to(ev, sel);
            apply(ev);
            if (opts_.self_check) self_check();
        }
        return finalize();
    }

private:
    bool done() const {
        if (rule_ == StopRule::HorizonCompleted) return tracked_remaining_ == 0;
        return !have_pending_;  // last workload job has arrived
    }

    Job& by_id(std::uint32_t id) { return jobs_[id - 1]; }

    void draw_next_arrival() {
        auto s = next_sample_();
        if (!s) {
            have_pending_ = false;
            return;
        }
        if (!(s->true_size > 0.0) || !(s->est_size > 0.0) || !(s->interarrival >= 0.0) ||
            !std::isfinite(s->true_size) || !std::isfinite(s->est_size)) {
            throw EngineError("workload sample " + std::to_string(arrival_count_ + 1) +
                              " is invalid: size=" + std::to_string(s->true_size) +
                              " est=" + std::to_string(s->est_size));
        }
        next_arrival_time_ += s->interarrival;
        pending_ = *s;
        have_pending_ = true;
    }

    void apply_arrival() {
        Job j;
        j.id = ++arrival_count_;
        j.arrival = clock_;
        j.true_size = pending_.true_size;
        j.est_size = pending_.est_size;
        j.tracked = arrival_count_ <= horizon_;
        jobs_.push_back(j);
        active_.push_back(j.id - 1);
        ++stats_.total_arrivals;
        stats_.peak_in_system = std::max(stats_.peak_in_system, active_.size());
        log_event({clock_, EventKind::Arrival, j.id});
        draw_next_arrival();
    }

    EngineEvent next_event(const Selection& sel) const {
        EngineEvent best{kInf, EventKind::Departure, 0};
        if (!sel.processor_sharing) {
            const Job& j = jobs_[sel.job_ids.front() - 1];
            best = {clock_ + j.remaining(), EventKind::Departure, j.id};
        } else {
            const double m = static_cast<double>(sel.job_ids.size());
            for (std::uint32_t id : sel.job_ids) {
                const Job& j = jobs_[id - 1];
                const EngineEvent cand{clock_ + m * j.remaining(), EventKind::Departure, j.id};
                if (event_before(cand, best)) best = cand;
            }
            // next distinct attained level: the share set grows when the
            // shared level catches up to it
            double a_min = kInf, next_level = kInf;
            for (std::uint32_t id : sel.job_ids) {
                a_min = std::min(a_min, jobs_[id - 1].attained);
            }
            for (std::uint32_t idx : active_) {
                const Job& j = jobs_[idx];
                if (j.attained > a_min + opts_.las_epsilon) {
                    next_level = std::min(next_level, j.attained);
                }
            }
            if (next_level < kInf) {
                const EngineEvent cand{clock_ + m * (next_level - a_min),
                                       EventKind::LasCatchUp, 0};
                if (event_before(cand, best)) best = cand;
            }
        }
        if (have_pending_) {
            const EngineEvent cand{next_arrival_time_, EventKind::Arrival,
                                   arrival_count_ + 1};
            if (event_before(cand, best)) best = cand;
        }
        if (best.time == kInf) {
            throw EngineError("event queue underflow: no next event");
        }
        return best;
    }

    void advance_to(const EngineEvent& ev, const Selection& sel) {
        const double elapsed = ev.time - clock_;
        if (elapsed <= 0.0) return;  // coincident events
        stats_.area_jobs_in_system += static_cast<double>(active_.size()) * elapsed;
        stats_.busy_time += elapsed;
        stats_.attained_delivered += elapsed;
        if (sel.processor_sharing) {
            const double share = elapsed / static_cast<double>(sel.job_ids.size());
            for (std::uint32_t id : sel.job_ids) by_id(id).attained += share;
        } else {
            by_id(sel.job_ids.front()).attained += elapsed;
        }
        clock_ = ev.time;
    }

    void apply(const EngineEvent& ev) {
        switch (ev.kind) {
            case EventKind::Departure: {
                Job& j = by_id(ev.job_id);
                j.attained = j.true_size;  // exact completion
                j.completion = clock_;
                active_.erase(std::find(active_.begin(), active_.end(), ev.job_id - 1));
                if (j.tracked) {
                    --tracked_remaining_;
                    ++completed_tracked_;
                }
                log_event(ev);
                return;
            }
            case EventKind::Arrival:
                apply_arrival();
                return;
            case EventKind::LasCatchUp:
                log_event(ev);
                return;
        }
    }

    void log_event(const EngineEvent& ev) {
        if (!opts_.record_decisions) return;
        decisions_.push_back(DecisionRecord{ev, {}, false});
        pending_log_ = true;
    }

    void attach_selection(const Selection& sel) {
        if (!opts_.record_decisions || !pending_log_) return;
        decisions_.back().selected = sel.job_ids;
        decisions_.back().processor_sharing = sel.processor_sharing;
        pending_log_ = false;
    }

    void self_check() const {
        double present_attained = 0.0;
        for (std::uint32_t idx : active_) {
            const Job& j = jobs_[idx];
            if (j.attained > j.true_size + 1e-9 * (1.0 + j.true_size)) {
                throw EngineError("self check: attained exceeds true size for job " +
                                  std::to_string(j.id));
            }
            present_attained += j.attained;
        }
        double completed_work = 0.0;
        for (const Job& j : jobs_) {
            if (j.completed()) completed_work += j.true_size;
        }
        const double delivered = stats_.attained_delivered;
        const double scale = 1.0 + std::fabs(delivered);
        if (std::fabs(present_attained + completed_work - delivered) > 1e-6 * scale) {
            throw EngineError("self check: attained service does not balance delivered work");
        }
        if (stats_.busy_time != stats_.attained_delivered) {
            throw EngineError("self check: busy time diverged from delivered work");
        }
    }

    RunResult finalize() {
        RunResult out;
        out.stats = stats_;
        out.stats.end_time = clock_;
        const std::size_t n_tracked =
            std::min<std::size_t>(jobs_.size(), static_cast<std::size_t>(horizon_));
        out.records.reserve(n_tracked);
        std::vector<JobRecord> completed;
        completed.reserve(n_tracked);
        for (std::size_t i = 0; i < n_tracked; ++i) {
            const Job& j = jobs_[i];
            JobRecord r;
            r.id = j.id;
            r.arrival = j.arrival;
            r.true_size = j.true_size;
            r.est_size = j.est_size;
            if (j.completed()) r.completion = j.completion;
            out.records.push_back(r);
            if (r.completed()) completed.push_back(r);
        }
        out.completed_tracked = completed.size();
        if (!completed.empty()) out.agg = aggregate(completed);
        out.decisions = std::move(decisions_);
        return out;
    }

    const SampleFn& next_sample_;
    Policy policy_;
    std::uint64_t horizon_;
    StopRule rule_;
    EngineOptions opts_;

    std::vector<Job> jobs_;
    std::vector<std::uint32_t> active_;  // indices into jobs_, arrival order
    double clock_ = 0.0;
    double next_arrival_time_ = 0.0;
    JobSample pending_{};
    bool have_pending_ = false;
    std::uint32_t arrival_count_ = 0;
    std::uint64_t tracked_remaining_ = 0;
    std::uint64_t completed_tracked_ = 0;
    RunStats stats_;
    std::vector<DecisionRecord> decisions_;
    bool pending_log_ = false;
};

}  // namespace

Selection select_job(std::span<const Job> queue, const Policy& policy, double las_epsilon) {
    if (queue.empty()) throw std::invalid_argument("select_job: queue is empty");
    std::vector<std::uint32_t> active(queue.size());
    for (std::size_t i = 0; i < queue.size(); ++i) active[i] = static_cast<std::uint32_t>(i);
    return select_impl([&](std::uint32_t idx) -> const Job& { return queue[idx]; }, active,
                       policy, las_epsilon);
}

RunResult run_simulation_samples(const SampleFn& next_sample, const Policy& policy,
                                 std::uint64_t horizon, StopRule stop_rule,
                                 EngineOptions opts, std::string policy_name,
                                 std::uint64_t seed_label) {
    Engine engine(next_sample, policy, horizon, stop_rule, opts);
    RunResult out = engine.run();
    out.policy = policy_name.empty() ? policy.name() : std::move(policy_name);
    out.seed = seed_label;
    return out;
}

RunResult run_simulation(const WorkloadSpec& workload, const Policy& policy,
                         std::uint64_t horizon, std::uint64_t seed, EngineOptions opts) {
    StopRule rule = StopRule::HorizonCompleted;
    if (workload.source == WorkloadSpec::Source::Trace) {
        rule = StopRule::LastArrival;
        horizon = std::min<std::uint64_t>(horizon, workload.trace->sizes.size());
    }
    if (opts.stop_rule) rule = *opts.stop_rule;
    SampleStream stream(workload, seed);
    const SampleFn fn = [&stream]() { return stream.next(); };
    Engine engine(fn, policy, horizon, rule, opts);
    RunResult out = engine.run();
    out.policy = policy.name();
    out.seed = seed;
    return out;
}

}  // namespace estq
