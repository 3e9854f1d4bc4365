#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lass/core.hpp"
#include "lass/prob_model.hpp"
#include "lass/schedulers.hpp"
#include "lass/workload.hpp"

namespace lass {

struct MaintainerConfig {
    bool enabled = true;
    std::size_t budget = 64;  // entries per idle window
    bool charge_load = false;  // add migrated MB to the default server's load
};

struct RunConfig {
    ClusterConfig cluster;
    WorkloadConfig workload;
    SchedulerKind scheduler;
    ThresholdGate gate;
    ProbConfig prob;
    MaintainerConfig maintainer;
    std::uint64_t seed = 0;

    void validate() const;

    /// Defaults that depend on the workload: load scale and threshold both
    /// equal the expected request length.
    static RunConfig with_workload_defaults(RunConfig cfg);
};

struct RedirectStats {
    std::size_t entries_created = 0;
    std::size_t live_entries = 0;
    double redirected_mb = 0.0;
    double migrated_mb = 0.0;
};

struct SimulationResult {
    std::vector<double> initial_loads;  // after straggler injection
    std::vector<double> final_loads;
    std::vector<std::size_t> request_counts;  // steps per server
    std::vector<ServerId> straggler_ids;
    std::vector<ScheduleDecision> decisions;
    std::vector<std::size_t> decision_windows;  // window index of each decision
    RedirectStats redirect_stats;
    double scheduled_mb = 0.0;
    std::uint64_t seed = 0;

    std::size_t num_servers() const { return final_loads.size(); }
};

/// Seeds for one run. Workload, initial loads, straggler choice and the
/// scheduler's RNG come from separate streams, so every policy sees the same
/// workload and cluster for a given seed.
struct RunSeeds {
    std::uint64_t workload, cluster, stragglers, scheduler;
    static RunSeeds from(std::uint64_t seed);
};

/// Generated workload for `cfg` under its seed.
std::vector<TimeWindow> workload_for(const RunConfig& cfg);

SimulationResult run(const RunConfig& cfg);
/// Same, replaying a fixed workload instead of generating one.
SimulationResult run(const RunConfig& cfg, const std::vector<TimeWindow>& windows);

/// Run i uses seed base_seed + i. Runs execute in parallel; results are in run
/// order. A fixed workload, when given, is shared by every run.
std::vector<SimulationResult> run_many(const RunConfig& cfg, std::size_t runs,
                                       std::uint64_t base_seed,
                                       const std::vector<TimeWindow>* workload = nullptr);

/// Single-threaded reference for run_many.
std::vector<SimulationResult> run_many_serial(const RunConfig& cfg, std::size_t runs,
                                              std::uint64_t base_seed,
                                              const std::vector<TimeWindow>* workload = nullptr);

}  // namespace lass
