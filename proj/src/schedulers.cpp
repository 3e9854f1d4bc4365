#include "lass/schedulers.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lass {

std::string SchedulerKind::label() const {
    switch (policy) {
        case Policy::rr: return "rr";
        case Policy::mlml: return "mlml";
        case Policy::trh: return "trh";
        case Policy::nltr: return std::to_string(levels) + "ltr";
    }
    return "unknown";
}

SchedulerKind SchedulerKind::parse(std::string_view text, unsigned default_levels) {
    if (text == "rr") return {Policy::rr, 0};
    if (text == "mlml") return {Policy::mlml, 0};
    if (text == "trh") return {Policy::trh, 0};
    if (text == "nltr") return {Policy::nltr, default_levels};
    constexpr std::string_view prefix = "nltr:";
    if (text.starts_with(prefix)) {
        const auto digits = text.substr(prefix.size());
        unsigned n = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty()) {
            return {Policy::nltr, n};
        }
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(text) +
                                "' (expected rr, mlml, trh, nltr or nltr:<n>)");
}

void SchedulerKind::validate(std::size_t num_servers) const {
    if (policy != Policy::nltr) return;
    if (levels >= 63 || (std::size_t{1} << levels) > num_servers) {
        throw std::invalid_argument("nltr levels " + std::to_string(levels) +
                                    " need 2^n <= servers (" + std::to_string(num_servers) + ")");
    }
}

ServerId benefit_gate(ServerId default_server, ServerId target_server, const StatisticLog& log,
                      const ThresholdGate& gate) {
    const double benefit = log.load(default_server) - log.load(target_server);
    return benefit > gate.threshold_mb ? target_server : default_server;
}

ScheduleDecision schedule_rr(const Step& step, std::size_t num_servers) {
    const ServerId d = default_server_for(step.object_id, num_servers);
    return make_decision(step, d, d, d);
}

namespace detail {

std::size_t draw_uniform(Rng& rng, std::size_t n) {
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(rng);
}

std::size_t draw_log_weighted(Rng& rng, std::span<const double> log_weights) {
    const double top = *std::max_element(log_weights.begin(), log_weights.end());
    if (!std::isfinite(top)) return draw_uniform(rng, log_weights.size());

    std::vector<double> cumulative(log_weights.size());
    double total = 0.0;
    for (std::size_t i = 0; i < log_weights.size(); ++i) {
        total += std::exp(log_weights[i] - top);
        cumulative[i] = total;
    }
    std::uniform_real_distribution<double> dist(0.0, total);
    const double u = dist(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                 log_weights.size() - 1);
}

std::vector<std::size_t> steps_by_length_desc(std::span<const Step> steps) {
    std::vector<std::size_t> order(steps.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (steps[a].total_length_mb != steps[b].total_length_mb) {
            return steps[a].total_length_mb > steps[b].total_length_mb;
        }
        return steps[a].object_id < steps[b].object_id;
    });
    return order;
}

ServerId min_load(const StatisticLog& log, ServerId a, ServerId b) {
    if (log.load(a) != log.load(b)) return log.load(a) < log.load(b) ? a : b;
    return std::min(a, b);
}

}  // namespace detail

std::vector<ScheduleDecision> schedule_mlml(std::span<const Step> steps, StatisticLog& log,
                                            const ThresholdGate& gate, const ProbConfig& prob) {
    std::vector<ScheduleDecision> decisions(steps.size());
    if (steps.empty()) return decisions;

    const std::size_t m = log.num_servers();
    const auto ranked_servers = servers_by_score_desc(log, prob);
    const auto ranked_steps = detail::steps_by_length_desc(steps);

    for (std::size_t k = 0; k < ranked_steps.size(); ++k) {
        const Step& step = steps[ranked_steps[k]];
        const ServerId def = default_server_for(step.object_id, m);
        const ServerId target = ranked_servers[k % m];
        const ServerId chosen = benefit_gate(def, target, log, gate);
        decisions[ranked_steps[k]] = make_decision(step, def, target, chosen);
        commit_decision(log, chosen, step.total_length_mb, prob);
    }
    return decisions;
}

ScheduleDecision schedule_trh(const Step& step, StatisticLog& log, const ThresholdGate& gate,
                              const ProbConfig& prob, Rng& rng) {
    const std::size_t m = log.num_servers();
    const auto ranked = servers_by_score_desc(log, prob);
    const std::size_t half = (m + 1) / 2;

    const ServerId first = ranked[detail::draw_uniform(rng, half)];
    const ServerId second = ranked[detail::draw_uniform(rng, half)];
    const ServerId target = detail::min_load(log, first, second);
    const ServerId def = default_server_for(step.object_id, m);
    const ServerId chosen = benefit_gate(def, target, log, gate);

    commit_decision(log, chosen, step.total_length_mb, prob);
    return make_decision(step, def, target, chosen);
}

std::size_t SectionPartition::section_for_length(double length_mb) const {
    std::size_t section = 0;
    for (double cut : request_boundaries) {
        if (length_mb <= cut) ++section;
    }
    return section;
}

namespace {

struct Range {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
};

std::vector<Range> middle_split(std::size_t count, unsigned levels) {
    std::vector<Range> ranges{{0, count}};
    for (unsigned level = 0; level < levels; ++level) {
        std::vector<Range> next;
        next.reserve(ranges.size() * 2);
        for (const Range& r : ranges) {
            const std::size_t mid = r.begin + r.size() / 2;
            next.push_back({r.begin, mid});
            next.push_back({mid, r.end});
        }
        ranges = std::move(next);
    }
    return ranges;
}

}  // namespace

SectionPartition build_sections(const StatisticLog& log, unsigned levels,
                                std::span<const Step> steps, const ProbConfig& prob) {
    SchedulerKind{Policy::nltr, levels}.validate(log.num_servers());

    SectionPartition out;
    const auto ranked_servers = servers_by_score_desc(log, prob);
    for (const Range& r : middle_split(ranked_servers.size(), levels)) {
        out.server_sections.emplace_back(ranked_servers.begin() + static_cast<long>(r.begin),
                                         ranked_servers.begin() + static_cast<long>(r.end));
    }

    const auto order = detail::steps_by_length_desc(steps);
    auto length_at = [&](std::size_t pos) { return steps[order[pos]].total_length_mb; };

    std::vector<Range> ranges{{0, order.size()}};
    std::vector<double> cuts;  // cuts[i] separates ranges[i] and ranges[i+1]
    constexpr double kNoFloor = -std::numeric_limits<double>::infinity();

    for (unsigned level = 0; level < levels; ++level) {
        std::vector<Range> next_ranges;
        std::vector<double> next_cuts;
        for (std::size_t s = 0; s < ranges.size(); ++s) {
            const Range r = ranges[s];
            const double floor_cut = s + 1 < ranges.size() ? cuts[s] : kNoFloor;
            double cut = floor_cut;
            std::size_t split = r.begin;
            if (r.size() > 0) {
                double sum = 0.0;
                for (std::size_t p = r.begin; p < r.end; ++p) sum += length_at(p);
                cut = sum / static_cast<double>(r.size());
                split = r.begin;
                while (split < r.end && length_at(split) > cut) ++split;
                if (split == r.begin || split == r.end) {
                    split = r.begin + r.size() / 2;
                    cut = length_at(split);
                }
            }
            next_ranges.push_back({r.begin, split});
            next_ranges.push_back({split, r.end});
            next_cuts.push_back(cut);
            if (s + 1 < ranges.size()) next_cuts.push_back(cuts[s]);
        }
        ranges = std::move(next_ranges);
        cuts = std::move(next_cuts);
    }

    out.request_boundaries = std::move(cuts);
    out.step_sections.assign(steps.size(), 0);
    for (std::size_t s = 0; s < ranges.size(); ++s) {
        for (std::size_t p = ranges[s].begin; p < ranges[s].end; ++p) {
            out.step_sections[order[p]] = s;
        }
    }
    return out;
}

std::vector<ScheduleDecision> schedule_nltr(std::span<const Step> steps, StatisticLog& log,
                                            const ThresholdGate& gate, unsigned levels,
                                            const ProbConfig& prob, Rng& rng) {
    const SectionPartition parts = build_sections(log, levels, steps, prob);
    std::vector<ScheduleDecision> decisions(steps.size());
    const std::size_t m = log.num_servers();

    std::vector<double> section_scores;
    for (std::size_t idx : detail::steps_by_length_desc(steps)) {
        const Step& step = steps[idx];
        const auto& pool = parts.server_sections[parts.step_sections[idx]];

        const auto scores = selection_log_scores(log, prob);
        section_scores.clear();
        for (ServerId id : pool) section_scores.push_back(scores[id]);

        const ServerId first = pool[detail::draw_log_weighted(rng, section_scores)];
        const ServerId second = pool[detail::draw_log_weighted(rng, section_scores)];
        const ServerId target = detail::min_load(log, first, second);
        const ServerId def = default_server_for(step.object_id, m);
        const ServerId chosen = benefit_gate(def, target, log, gate);

        decisions[idx] = make_decision(step, def, target, chosen);
        commit_decision(log, chosen, step.total_length_mb, prob);
    }
    return decisions;
}

namespace {

class RoundRobinScheduler final : public Scheduler {
public:
    explicit RoundRobinScheduler(ProbConfig prob) : prob_(prob) {}
    std::vector<ScheduleDecision> schedule_window(std::span<const Step> steps, StatisticLog& log,
                                                  Rng&) override {
        std::vector<ScheduleDecision> out;
        out.reserve(steps.size());
        for (const Step& step : steps) {
            out.push_back(schedule_rr(step, log.num_servers()));
            commit_decision(log, out.back().chosen_server, step.total_length_mb, prob_);
        }
        return out;
    }

private:
    ProbConfig prob_;
};

class MlmlScheduler final : public Scheduler {
public:
    MlmlScheduler(ThresholdGate gate, ProbConfig prob) : gate_(gate), prob_(prob) {}
    std::vector<ScheduleDecision> schedule_window(std::span<const Step> steps, StatisticLog& log,
                                                  Rng&) override {
        return schedule_mlml(steps, log, gate_, prob_);
    }

private:
    ThresholdGate gate_;
    ProbConfig prob_;
};

class TrhScheduler final : public Scheduler {
public:
    TrhScheduler(ThresholdGate gate, ProbConfig prob) : gate_(gate), prob_(prob) {}
    std::vector<ScheduleDecision> schedule_window(std::span<const Step> steps, StatisticLog& log,
                                                  Rng& rng) override {
        std::vector<ScheduleDecision> out;
        out.reserve(steps.size());
        for (const Step& step : steps) out.push_back(schedule_trh(step, log, gate_, prob_, rng));
        return out;
    }

private:
    ThresholdGate gate_;
    ProbConfig prob_;
};

class NltrScheduler final : public Scheduler {
public:
    NltrScheduler(ThresholdGate gate, ProbConfig prob, unsigned levels)
        : gate_(gate), prob_(prob), levels_(levels) {}
    std::vector<ScheduleDecision> schedule_window(std::span<const Step> steps, StatisticLog& log,
                                                  Rng& rng) override {
        if (steps.empty()) return {};
        return schedule_nltr(steps, log, gate_, levels_, prob_, rng);
    }

private:
    ThresholdGate gate_;
    ProbConfig prob_;
    unsigned levels_;
};

}  // namespace

std::unique_ptr<Scheduler> make_scheduler(const SchedulerKind& kind, const ThresholdGate& gate,
                                          const ProbConfig& prob) {
    switch (kind.policy) {
        case Policy::rr: return std::make_unique<RoundRobinScheduler>(prob);
        case Policy::mlml: return std::make_unique<MlmlScheduler>(gate, prob);
        case Policy::trh: return std::make_unique<TrhScheduler>(gate, prob);
        case Policy::nltr: return std::make_unique<NltrScheduler>(gate, prob, kind.levels);
    }
    throw std::invalid_argument("unknown policy");
}

}  // namespace lass
