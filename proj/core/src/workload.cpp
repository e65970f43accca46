#include "estq/workload.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace estq {

SizeDistribution SizeDistribution::weibull(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) {
        throw std::invalid_argument("SizeDistribution: shape and scale must be > 0");
    }
    return SizeDistribution{Family::Weibull, shape, scale};
}

SizeDistribution SizeDistribution::weibull_unit_mean(double shape) {
    return weibull(shape, weibull_scale_for_unit_mean(shape));
}

SizeDistribution SizeDistribution::exponential(double mean) {
    if (!(mean > 0.0)) throw std::invalid_argument("SizeDistribution: mean must be > 0");
    return SizeDistribution{Family::Exponential, 1.0, mean};
}

double SizeDistribution::mean() const {
    switch (family) {
        case Family::Weibull:
            return scale * std::tgamma(1.0 + 1.0 / shape);
        case Family::Exponential:
            return scale;
    }
    throw std::logic_error("SizeDistribution::mean: unreachable");
}

double SizeDistribution::sample(double u01) const {
    // inverse CDF on 1-u so u in [0,1) keeps the log argument positive
    const double e = -std::log1p(-u01);
    switch (family) {
        case Family::Weibull:
            return scale * std::pow(e, 1.0 / shape);
        case Family::Exponential:
            return scale * e;
    }
    throw std::logic_error("SizeDistribution::sample: unreachable");
}

double weibull_scale_for_unit_mean(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("weibull_scale_for_unit_mean: shape must be > 0");
    return 1.0 / std::tgamma(1.0 + 1.0 / shape);
}

TraceData ingest_trace_records(const std::vector<TraceRecord>& records, double speed) {
    if (records.empty()) throw std::runtime_error("trace: no records");
    double total_bytes = 0.0;
    for (const auto& r : records) {
        if (r.size_bytes == 0) {
            throw std::runtime_error("trace: non-positive size_bytes at job_index " +
                                     std::to_string(r.job_index));
        }
        total_bytes += static_cast<double>(r.size_bytes);
    }
    TraceData out;
    out.mean_bytes = total_bytes / static_cast<double>(records.size());
    out.speed = speed > 0.0 ? speed : out.mean_bytes;
    out.sizes.reserve(records.size());
    for (const auto& r : records) {
        out.sizes.push_back(static_cast<double>(r.size_bytes) / out.speed);
    }
    return out;
}

TraceData ingest_trace(const std::string& path, double speed) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("trace: cannot open " + path);
    std::vector<TraceRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("trace: malformed row at line " + std::to_string(lineno) +
                                     " in " + path);
        }
        TraceRecord rec;
        const char* b1 = line.data();
        const char* e1 = line.data() + comma;
        const char* b2 = line.data() + comma + 1;
        const char* e2 = line.data() + line.size();
        // tolerate a trailing \r from CRLF files
        if (e2 > b2 && *(e2 - 1) == '\r') --e2;
        auto r1 = std::from_chars(b1, e1, rec.job_index);
        long long bytes = 0;
        auto r2 = std::from_chars(b2, e2, bytes);
        if (r1.ec != std::errc{} || r1.ptr != e1 || r2.ec != std::errc{} || r2.ptr != e2) {
            throw std::runtime_error("trace: malformed row at line " + std::to_string(lineno) +
                                     " in " + path);
        }
        if (bytes <= 0) {
            throw std::runtime_error("trace: non-positive size_bytes at job_index " +
                                     std::to_string(rec.job_index));
        }
        rec.size_bytes = static_cast<std::uint64_t>(bytes);
        records.push_back(rec);
    }
    if (records.empty()) throw std::runtime_error("trace: no records");
    return ingest_trace_records(records, speed);
}

WorkloadSpec WorkloadSpec::synthetic(SizeDistribution sizes, ErrorModel error, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("WorkloadSpec: rho must be in (0,1)");
    WorkloadSpec w;
    w.source = Source::Synthetic;
    w.size_dist = sizes;
    w.error = error;
    w.rho = rho;
    return w;
}

WorkloadSpec WorkloadSpec::from_trace(std::shared_ptr<const TraceData> trace, ErrorModel error,
                                      double rho) {
    if (!trace || trace->sizes.empty()) throw std::invalid_argument("WorkloadSpec: empty trace");
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("WorkloadSpec: rho must be in (0,1)");
    WorkloadSpec w;
    w.source = Source::Trace;
    w.error = error;
    w.rho = rho;
    w.trace = std::move(trace);
    return w;
}

double WorkloadSpec::mean_size() const {
    if (source == Source::Trace) {
        double sum = 0.0;
        for (double s : trace->sizes) sum += s;
        return sum / static_cast<double>(trace->sizes.size());
    }
    return size_dist.mean();
}

double WorkloadSpec::arrival_rate() const { return rho / mean_size(); }

SampleStream::SampleStream(const WorkloadSpec& spec, std::uint64_t seed)
    : spec_(&spec), rng_(seed) {}

std::optional<JobSample> SampleStream::next() {
    const double lambda = spec_->arrival_rate();
    JobSample s;
    if (spec_->source == WorkloadSpec::Source::Trace) {
        if (emitted_ >= spec_->trace->sizes.size()) return std::nullopt;
        s.interarrival = -std::log1p(-rng_.uniform01()) / lambda;
        s.true_size = spec_->trace->sizes[emitted_];
        s.est_size = s.true_size * spec_->error.sample(rng_.uniform_open());
    } else {
        s.interarrival = -std::log1p(-rng_.uniform01()) / lambda;
        s.true_size = spec_->size_dist.sample(rng_.uniform01());
        s.est_size = s.true_size * spec_->error.sample(rng_.uniform_open());
    }
    ++emitted_;
    return s;
}

}  // namespace estq
