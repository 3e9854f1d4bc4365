#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lass/core.hpp"

namespace lass {

struct SizeRange {
    double min_mb = 0.0;
    double max_mb = 0.0;
    double midpoint() const { return 0.5 * (min_mb + max_mb); }
};

enum SizeClass : std::size_t { kLarge = 0, kMedium = 1, kSmall = 2 };

struct WorkloadConfig {
    std::size_t num_requests = 2000;
    std::array<double, 3> mix{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};  // large, medium, small
    std::array<SizeRange, 3> ranges{SizeRange{10.0, 100.0}, SizeRange{4.0, 10.0},
                                    SizeRange{0.1, 4.0}};
    std::uint64_t num_objects = 100000;
    std::size_t windows = 100;
    std::uint64_t seed = 0;

    void validate() const;
    /// Expected request length under the mix; the default for both the load
    /// scale and the benefit threshold.
    double mean_request_length_mb() const;
};

struct ClusterConfig {
    std::size_t num_servers = 100;
    std::size_t num_clients = 200;  // recorded only
    double initial_load_mean_mb = 200.0;
    double initial_load_std_mb = 10.0;
    double straggler_fraction = 0.1;
    double straggler_factor = 5.0;
    std::uint64_t seed = 0;

    void validate() const;
    std::size_t straggler_count() const;
};

/// Exactly `windows` windows in index order; requests inside a window keep
/// generation order.
std::vector<TimeWindow> gen_requests(const WorkloadConfig& cfg);

/// Normal(mean, std) per server clipped at zero; std == 0 gives exactly mean.
std::vector<double> gen_initial_loads(const ClusterConfig& cfg);

struct StragglerInjection {
    std::vector<double> loads;
    std::vector<ServerId> stragglers;  // ascending
};

/// floor(fraction * M) distinct servers, each set to factor x the mean load of
/// the servers left alone.
StragglerInjection inject_stragglers(std::vector<double> loads, double fraction, double factor,
                                     std::uint64_t seed);

/// Plain-text workload records: a "# windows=<n>" line, then
/// "window,object_id,offset,length_mb" per request. Lengths round-trip exactly.
void write_workload(std::ostream& out, const std::vector<TimeWindow>& windows);
std::vector<TimeWindow> read_workload(std::istream& in);
void save_workload(const std::string& path, const std::vector<TimeWindow>& windows);
std::vector<TimeWindow> load_workload(const std::string& path);

/// Independent 64-bit stream seed derived from a run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace lass
