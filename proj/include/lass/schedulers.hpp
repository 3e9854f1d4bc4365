#pragma once

#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lass/core.hpp"
#include "lass/prob_model.hpp"

namespace lass {

using Rng = std::mt19937_64;

enum class Policy { rr, mlml, trh, nltr };

struct SchedulerKind {
    Policy policy = Policy::rr;
    unsigned levels = 0;  // nLTR only: K = 2^levels sections

    /// "rr", "mlml", "trh", "1ltr", "2ltr", ...
    std::string label() const;

    /// Accepts rr | mlml | trh | nltr | nltr:<n>; bare nltr takes default_levels.
    static SchedulerKind parse(std::string_view text, unsigned default_levels = 2);

    /// Throws std::invalid_argument if 2^levels exceeds the server count.
    void validate(std::size_t num_servers) const;

    friend bool operator==(const SchedulerKind&, const SchedulerKind&) = default;
};

/// Redirect is accepted only when it buys more than `threshold_mb` of load.
struct ThresholdGate {
    double threshold_mb = 0.0;
};

ServerId benefit_gate(ServerId default_server, ServerId target_server, const StatisticLog& log,
                      const ThresholdGate& gate);

/// Object id mod M. Pure: does not touch any log.
ScheduleDecision schedule_rr(const Step& step, std::size_t num_servers);

/// Max Length - Min Load. Steps are ranked by total length (desc, then object
/// id) and paired circularly with servers ranked once per window by selection
/// score. Each decision is committed to the log before the next one is gated.
/// Decisions are returned in the input step order.
std::vector<ScheduleDecision> schedule_mlml(std::span<const Step> steps, StatisticLog& log,
                                            const ThresholdGate& gate, const ProbConfig& prob);

/// Two Random from the top Half: two uniform draws with replacement from the
/// first ceil(M/2) servers of the current ranking; the lighter one is the
/// target. Commits the decision to the log.
ScheduleDecision schedule_trh(const Step& step, StatisticLog& log, const ThresholdGate& gate,
                              const ProbConfig& prob, Rng& rng);

/// Matched server and request sections for nLTR.
struct SectionPartition {
    /// K = 2^levels contiguous slices of the server ranking, best first.
    std::vector<std::vector<ServerId>> server_sections;
    /// K-1 non-increasing length cut points; see section_for_length.
    std::vector<double> request_boundaries;
    /// Section index of each input step, by partition membership.
    std::vector<std::size_t> step_sections;

    std::size_t num_sections() const { return server_sections.size(); }

    /// Number of cut points the length does not exceed; a length equal to a
    /// cut point falls in the lower section.
    std::size_t section_for_length(double length_mb) const;
};

/// Servers: recursive middle split of the ranking (left gets floor(len/2)).
/// Requests: recursive split of the length-desc order at each section's mean,
/// (> mean) above and (<= mean) below, falling back to a middle split when one
/// side would be empty. Throws std::invalid_argument if 2^levels > M.
SectionPartition build_sections(const StatisticLog& log, unsigned levels,
                                std::span<const Step> steps, const ProbConfig& prob);

/// n-Level Two Random. Steps are served longest first; each one draws two
/// servers from its matched server section, weighted by the servers' current
/// selection scores, and targets the lighter draw. Decisions are returned in
/// the input step order.
std::vector<ScheduleDecision> schedule_nltr(std::span<const Step> steps, StatisticLog& log,
                                            const ThresholdGate& gate, unsigned levels,
                                            const ProbConfig& prob, Rng& rng);

/// Window-level policy object used by the simulator. Every policy, RR
/// included, leaves the log updated with its decisions.
class Scheduler {
public:
    virtual ~Scheduler() = default;
    virtual std::vector<ScheduleDecision> schedule_window(std::span<const Step> steps,
                                                          StatisticLog& log, Rng& rng) = 0;
};

std::unique_ptr<Scheduler> make_scheduler(const SchedulerKind& kind, const ThresholdGate& gate,
                                          const ProbConfig& prob);

namespace detail {

/// Index of a draw from [0, n).
std::size_t draw_uniform(Rng& rng, std::size_t n);

/// Index of a draw proportional to exp(log_weights[i]). Falls back to a uniform
/// draw if every weight is zero.
std::size_t draw_log_weighted(Rng& rng, std::span<const double> log_weights);

/// Length-desc order of steps, ties by object id then input position.
std::vector<std::size_t> steps_by_length_desc(std::span<const Step> steps);

/// Lighter of two servers; ties go to the smaller id.
ServerId min_load(const StatisticLog& log, ServerId a, ServerId b);

}  // namespace detail

}  // namespace lass
