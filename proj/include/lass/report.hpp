#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lass/simulator.hpp"

namespace lass {

inline constexpr const char* kVersion = "1.0.0";

/// Ordered key/value echo of the effective configuration.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

struct LoadBucket {
    double lo_mb = 0.0;  // inclusive
    double hi_mb = 0.0;  // exclusive
    std::size_t servers = 0;
    std::size_t max_requests = 0;
};

/// Occupied load buckets only, ascending.
struct LoadHistogram {
    double bucket_width_mb = 10.0;
    std::vector<LoadBucket> buckets;
};

struct MetricsSummary {
    std::string label;
    double mean_load_mb = 0.0;
    double std_load_mb = 0.0;  // population
    double cov = 0.0;
    double max_load_mb = 0.0;
    std::size_t straggler_request_count = 0;
    std::size_t total_requests = 0;
};

/// Elementwise mean of final loads. Throws std::invalid_argument on an empty
/// list or mismatched server counts.
std::vector<double> average_loads(std::span<const SimulationResult> results);

/// Servers grouped by floor(final_load / width); each bucket reports the
/// largest per-server step count inside it.
LoadHistogram load_histogram(const SimulationResult& result, double bucket_width_mb);
/// Same over the (server, run) pairs of several runs pooled together.
LoadHistogram load_histogram(std::span<const SimulationResult> results, double bucket_width_mb);

std::size_t straggler_hits(const SimulationResult& result);

struct LoadStats {
    double mean = 0.0;
    double stddev = 0.0;
    double cov = 0.0;
    double max = 0.0;
};
LoadStats load_stats(std::span<const double> loads);

MetricsSummary summarize(const SimulationResult& result, std::string label);

/// One row of the combined summary table.
struct SummaryRow {
    std::string algorithm;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    MetricsSummary metrics;
    RedirectStats redirects;
};

// CSV. Optional preamble lines are written first as "# key=value" comments.
std::string loads_csv(std::span<const double> loads, const ConfigEcho& preamble = {});
std::string histogram_csv(const LoadHistogram& hist, const ConfigEcho& preamble = {});
std::string summary_csv(std::span<const SummaryRow> rows, const ConfigEcho& preamble = {});

/// Header plus rows of a CSV produced above; '#' lines are skipped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
CsvTable parse_csv(std::istream& in);

// JSON (pretty-printed, key order fixed).
std::string results_json(const std::string& algorithm, std::span<const SimulationResult> results,
                         const LoadHistogram& hist, const ConfigEcho& config,
                         std::uint64_t base_seed);
std::string summary_json(std::span<const SummaryRow> rows, const ConfigEcho& config);

// SVG, 800x400, self-contained.
std::string loads_svg(std::span<const double> loads, const std::string& title);
struct HistogramSeries {
    std::string label;
    LoadHistogram hist;
};
std::string histogram_svg(std::span<const HistogramSeries> series, const std::string& title);

/// Writes `content` to `path`; throws std::runtime_error naming the path.
void emit_file(const std::string& path, const std::string& content);

}  // namespace lass
