#include "estq/policies.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>
#include <vector>

namespace estq {

double score_srpt(double attained, double true_size) {
    if (!(true_size > 0.0) || attained < 0.0 || attained >= true_size) {
        throw std::invalid_argument("score_srpt: requires 0 <= attained < true_size");
    }
    return 1.0 / (true_size - attained);
}

Score score_serpt(double attained, double est_size) {
    if (!(est_size > 0.0) || attained < 0.0) {
        throw std::invalid_argument("score_serpt: requires attained >= 0, est_size > 0");
    }
    if (est_size > attained) return Score::finite(1.0 / (est_size - attained));
    return Score::top();
}

double score_sept(double est_size) {
    if (!(est_size > 0.0)) throw std::invalid_argument("score_sept: est_size must be > 0");
    return 1.0 / est_size;
}

double score_seh(double attained, double est_size, double hedge) {
    if (!(est_size > 0.0) || attained < 0.0 || !(hedge > 0.0)) {
        throw std::invalid_argument("score_seh: requires attained >= 0, est_size > 0, hedge > 0");
    }
    if (attained >= est_size) return hedge / est_size;
    return 1.0 / (est_size - attained * (1.0 - attained / (hedge * est_size)));
}

namespace {

constexpr std::array<PolicyInfo, 7> kCatalog{{
    {PolicyId::Srpt, "SRPT", Discipline::ScoreBased, true, false},
    {PolicyId::Serpt, "SERPT", Discipline::ScoreBased, false, true},
    {PolicyId::Sept, "SEPT", Discipline::ScoreBased, false, true},
    {PolicyId::Seh, "SEH", Discipline::ScoreBased, false, true},
    {PolicyId::Gittins, "GITTINS", Discipline::ScoreBased, false, true},
    {PolicyId::Las, "LAS", Discipline::LeastAttained, false, false},
    {PolicyId::Fcfs, "FCFS", Discipline::Fifo, false, false},
}};

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

std::span<const PolicyInfo> policy_catalog() { return kCatalog; }

const PolicyInfo& policy_info(PolicyId id) {
    for (const auto& info : kCatalog) {
        if (info.id == id) return info;
    }
    throw std::logic_error("policy_info: unknown id");
}

std::optional<PolicyId> policy_by_name(std::string_view name) {
    const std::string u = upper(name);
    for (const auto& info : kCatalog) {
        if (u == info.name) return info.id;
    }
    return std::nullopt;
}

std::string suggest_policy_name(std::string_view name) {
    const std::string u = upper(name);
    std::size_t best = static_cast<std::size_t>(-1);
    const char* pick = kCatalog.front().name;
    for (const auto& info : kCatalog) {
        const std::size_t d = edit_distance(u, info.name);
        if (d < best) {
            best = d;
            pick = info.name;
        }
    }
    return pick;
}

Policy::Policy(const PolicyInfo* info, PolicyParams params)
    : info_(info), params_(params) {
    if (info_->id == PolicyId::Gittins) {
        gittins_ = std::make_unique<GittinsScorer>(params_.error);
    }
}

Policy::Policy(const Policy& other) : info_(other.info_), params_(other.params_) {
    if (info_->id == PolicyId::Gittins) {
        // fresh memo: caches are per run, never shared
        gittins_ = std::make_unique<GittinsScorer>(params_.error);
    }
}

Policy& Policy::operator=(const Policy& other) {
    if (this != &other) {
        info_ = other.info_;
        params_ = other.params_;
        gittins_.reset();
        if (info_->id == PolicyId::Gittins) {
            gittins_ = std::make_unique<GittinsScorer>(params_.error);
        }
    }
    return *this;
}

Policy Policy::make(PolicyId id, PolicyParams params) {
    return Policy(&policy_info(id), params);
}

std::optional<Policy> Policy::by_name(std::string_view name, PolicyParams params) {
    const auto id = policy_by_name(name);
    if (!id) return std::nullopt;
    return make(*id, params);
}

Score Policy::score(double attained, double true_size, double est_size) const {
    switch (info_->id) {
        case PolicyId::Srpt:
            return Score::finite(score_srpt(attained, true_size));
        case PolicyId::Serpt:
            return score_serpt(attained, est_size);
        case PolicyId::Sept:
            return Score::finite(score_sept(est_size));
        case PolicyId::Seh:
            return Score::finite(score_seh(attained, est_size, params_.seh_hedge));
        case PolicyId::Gittins:
            return Score::finite(gittins_->score(attained, est_size));
        case PolicyId::Las:
        case PolicyId::Fcfs:
            throw std::logic_error("Policy::score: not a score-based policy");
    }
    throw std::logic_error("Policy::score: unreachable");
}

}  // namespace estq
