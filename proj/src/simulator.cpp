#include "lass/simulator.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

#include "lass/redirect.hpp"

namespace lass {

void RunConfig::validate() const {
    cluster.validate();
    workload.validate();
    prob.validate();
    scheduler.validate(cluster.num_servers);
    if (std::isnan(gate.threshold_mb)) throw std::invalid_argument("threshold must be a number");
}

RunConfig RunConfig::with_workload_defaults(RunConfig cfg) {
    const double mean = cfg.workload.mean_request_length_mb();
    cfg.prob.load_scale_mb = mean;
    cfg.gate.threshold_mb = mean;
    return cfg;
}

RunSeeds RunSeeds::from(std::uint64_t seed) {
    return {derive_seed(seed, 1), derive_seed(seed, 2), derive_seed(seed, 3), derive_seed(seed, 4)};
}

std::vector<TimeWindow> workload_for(const RunConfig& cfg) {
    WorkloadConfig w = cfg.workload;
    w.seed = RunSeeds::from(cfg.seed).workload;
    return gen_requests(w);
}

SimulationResult run(const RunConfig& cfg) {
    cfg.validate();
    return run(cfg, workload_for(cfg));
}

SimulationResult run(const RunConfig& cfg, const std::vector<TimeWindow>& windows) {
    cfg.validate();
    const RunSeeds seeds = RunSeeds::from(cfg.seed);
    const std::size_t m = cfg.cluster.num_servers;

    ClusterConfig cluster = cfg.cluster;
    cluster.seed = seeds.cluster;
    auto injected = inject_stragglers(gen_initial_loads(cluster), cluster.straggler_fraction,
                                      cluster.straggler_factor, seeds.stragglers);

    SimulationResult result;
    result.seed = cfg.seed;
    result.initial_loads = injected.loads;
    result.straggler_ids = std::move(injected.stragglers);
    result.request_counts.assign(m, 0);

    StatisticLog log = new_statistic_log(m, result.initial_loads);
    RedirectTables tables(m);
    auto scheduler = make_scheduler(cfg.scheduler, cfg.gate, cfg.prob);
    Rng rng(seeds.scheduler);

    for (const TimeWindow& window : windows) {
        log.pending() = window.requests;
        const auto steps = group_into_steps(window);
        if (steps.empty()) {
            if (!cfg.maintainer.enabled) continue;
            auto flushed = maintainer_flush(tables, true, cfg.maintainer.budget);
            result.redirect_stats.migrated_mb += flushed.migrated_mb;
            if (cfg.maintainer.charge_load) {
                for (const auto& moved : flushed.migrated) {
                    update_load(log, moved.default_server, moved.entry.length_mb);
                }
            }
            continue;
        }

        auto decisions = scheduler->schedule_window(steps, log, rng);
        for (std::size_t i = 0; i < decisions.size(); ++i) {
            const auto& d = decisions[i];
            ++result.request_counts[d.chosen_server];
            result.scheduled_mb += d.length_mb;
            if (d.redirected) {
                record_redirect(tables, d, steps[i].requests);
                result.redirect_stats.entries_created += steps[i].requests.size();
                result.redirect_stats.redirected_mb += d.length_mb;
            }
            result.decisions.push_back(d);
            result.decision_windows.push_back(window.index);
        }
        log.pending().clear();
    }

    result.final_loads = log.loads();
    result.redirect_stats.live_entries = tables.live_entries();
    return result;
}

std::vector<SimulationResult> run_many_serial(const RunConfig& cfg, std::size_t runs,
                                              std::uint64_t base_seed,
                                              const std::vector<TimeWindow>* workload) {
    if (runs == 0) throw std::invalid_argument("run count must be positive");
    cfg.validate();
    std::vector<SimulationResult> results;
    results.reserve(runs);
    for (std::size_t i = 0; i < runs; ++i) {
        RunConfig c = cfg;
        c.seed = base_seed + i;
        results.push_back(workload ? run(c, *workload) : run(c));
    }
    return results;
}

std::vector<SimulationResult> run_many(const RunConfig& cfg, std::size_t runs,
                                       std::uint64_t base_seed,
                                       const std::vector<TimeWindow>* workload) {
    if (runs == 0) throw std::invalid_argument("run count must be positive");
    cfg.validate();
    std::vector<SimulationResult> results(runs);
    std::exception_ptr failure;
    const auto n = static_cast<long long>(runs);

#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) {
        try {
            RunConfig c = cfg;
            c.seed = base_seed + static_cast<std::uint64_t>(i);
            results[static_cast<std::size_t>(i)] = workload ? run(c, *workload) : run(c);
        } catch (...) {
#pragma omp critical(lass_run_many_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

}  // namespace lass
