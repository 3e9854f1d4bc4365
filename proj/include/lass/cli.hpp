#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lass/report.hpp"
#include "lass/simulator.hpp"

namespace lass {

/// Bad flag, bad config file or violated precondition; maps to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CliConfig {
    RunConfig base;  // scheduler field unused; see algorithms
    std::vector<SchedulerKind> algorithms;
    std::size_t runs = 100;
    std::uint64_t base_seed = 42;
    std::string output_dir = "results";
    std::vector<std::string> formats{"csv", "json", "svg"};
    double bucket_width_mb = 10.0;
    unsigned nltr_levels = 2;
    std::string dump_workload;
    std::string workload_file;
    int threads = 0;  // 0: OpenMP default

    /// Every setting as key = value text, in flag order; echoed into outputs.
    std::map<std::string, std::string> settings;

    bool wants(const std::string& format) const;
    ConfigEcho echo() const;
};

/// Raw settings in the flat "key = value" format: one per line, '#' starts a
/// comment, keys are the long flag names without dashes. Errors cite the line.
std::map<std::string, std::string> read_config_settings(std::istream& in);

/// Defaults overridden by the file's settings.
CliConfig load_config_file(const std::string& path);

/// Defaults, then settings (in any order), resolved and validated.
CliConfig resolve_settings(const std::map<std::string, std::string>& settings);

/// Defaults, then --config file, then flags. Throws ConfigError.
/// Returns false if help was requested (usage already printed to `out`).
bool parse_cli(int argc, const char* const* argv, CliConfig& cfg, std::ostream& out);

/// Whole command: parse, run every algorithm on the same seeds, write outputs.
/// Exit codes: 0 success, 1 runtime failure, 2 config error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lass
