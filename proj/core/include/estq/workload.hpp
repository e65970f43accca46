#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "estq/error_model.hpp"
#include "estq/rng.hpp"

namespace estq {

struct SizeDistribution {
    enum class Family { Weibull, Exponential };

    Family family = Family::Weibull;
    double shape = 1.0;  // Weibull k; ignored for Exponential
    double scale = 1.0;

    static SizeDistribution weibull(double shape, double scale);
    // Weibull with scale 1/Gamma(1 + 1/k): E[S] = 1, so the arrival rate
    // equals the offered load directly.
    static SizeDistribution weibull_unit_mean(double shape);
    static SizeDistribution exponential(double mean);

    double mean() const;
    double sample(double u01) const;
};

// scale giving E[S] = 1 for Weibull shape k: 1 / Gamma(1 + 1/k)
double weibull_scale_for_unit_mean(double shape);

struct TraceRecord {
    std::uint64_t job_index = 0;
    std::uint64_t size_bytes = 0;
};

struct TraceData {
    std::vector<double> sizes;  // time units, trace order
    double speed = 1.0;         // bytes per time unit actually applied
    double mean_bytes = 0.0;
    std::size_t count() const { return sizes.size(); }
};

// Headerless CSV rows "job_index,size_bytes". speed <= 0 selects the
// documented default: mean bytes per time unit, i.e. unit-mean sizes.
// Malformed rows are reported with their line number, non-positive sizes
// with their job_index.
TraceData ingest_trace(const std::string& path, double speed = 0.0);
TraceData ingest_trace_records(const std::vector<TraceRecord>& records, double speed = 0.0);

struct JobSample {
    double interarrival = 0.0;
    double true_size = 0.0;
    double est_size = 0.0;
};

struct WorkloadSpec {
    enum class Source { Synthetic, Trace };

    Source source = Source::Synthetic;
    SizeDistribution size_dist{};
    ErrorModel error{};
    double rho = 0.9;  // offered load in (0,1); arrival rate = rho / E[S]
    std::shared_ptr<const TraceData> trace;  // Source::Trace

    static WorkloadSpec synthetic(SizeDistribution sizes, ErrorModel error, double rho);
    static WorkloadSpec from_trace(std::shared_ptr<const TraceData> trace, ErrorModel error,
                                   double rho);

    double mean_size() const;
    double arrival_rate() const;
};

// Draw order per job is fixed (interarrival, size, error), so two runs with
// the same seed see identical arrival/size sequences regardless of policy,
// and changing sigma perturbs only the estimates.
class SampleStream {
public:
    SampleStream(const WorkloadSpec& spec, std::uint64_t seed);

    // nullopt once a trace is exhausted; synthetic streams never end.
    std::optional<JobSample> next();

    std::uint64_t emitted() const { return emitted_; }

private:
    const WorkloadSpec* spec_;
    Rng rng_;
    std::uint64_t emitted_ = 0;
};

}  // namespace estq
