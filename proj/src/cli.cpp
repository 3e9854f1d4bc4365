#include "lass/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <omp.h>

#include "lass/text.hpp"

namespace lass {

namespace {

struct SettingSpec {
    const char* key;
    const char* default_value;
    const char* help;
    bool echoed = true;
};

const std::vector<SettingSpec>& setting_specs() {
    static const std::vector<SettingSpec> specs{
        {"servers", "100", "number of object storage servers (M)"},
        {"clients", "200", "number of compute clients (recorded only)"},
        {"requests", "2000", "requests per run"},
        {"windows", "100", "time windows per run"},
        {"objects", "100000", "object id space; ids are uniform in [0, objects)"},
        {"mix", "0.3333333333333333,0.3333333333333333,0.3333333333333334",
         "large,medium,small size-class weights (sum to 1)"},
        {"large-range", "10,100", "large request length range in MB: min,max"},
        {"medium-range", "4,10", "medium request length range in MB: min,max"},
        {"small-range", "0.1,4", "small request length range in MB: min,max"},
        {"initial-load-mean", "200", "mean initial server load in MB"},
        {"initial-load-std", "10", "std of initial server load in MB"},
        {"straggler-fraction", "0.1", "fraction of servers injected as stragglers"},
        {"straggler-factor", "5", "straggler load as a multiple of the regular mean"},
        {"threshold", "auto", "benefit gate threshold in MB (auto: mean request length)"},
        {"load-scale", "auto", "exponential decay scale in MB (auto: mean request length)"},
        {"algorithms", "rr,mlml,trh,nltr:1,nltr:2", "comma list of rr, mlml, trh, nltr, nltr:<n>"},
        {"nltr-levels", "2", "section levels for a bare 'nltr' entry"},
        {"runs", "100", "seeded runs per algorithm"},
        {"base-seed", "42", "run i uses seed base-seed + i"},
        {"maintainer", "true", "run the redirect maintainer in idle windows (true|false)"},
        {"maintainer-budget", "64", "redirect entries migrated per idle window"},
        {"charge-migration", "false", "add migrated MB to default server loads (true|false)"},
        {"bucket-width", "10", "load histogram bucket width in MB"},
        {"output-dir", "results", "directory for report files", false},
        {"formats", "csv,json,svg", "comma list of csv, json, svg"},
        {"dump-workload", "", "write run 0's workload to this file", false},
        {"workload-file", "", "replay this workload file in every run"},
        {"threads", "0", "worker threads for parallel runs (0: OpenMP default)", false},
    };
    return specs;
}

bool is_known_key(const std::string& key) {
    const auto& specs = setting_specs();
    return std::any_of(specs.begin(), specs.end(),
                       [&](const SettingSpec& s) { return key == s.key; });
}

[[noreturn]] void fail(const std::string& key, const std::string& message) {
    throw ConfigError("--" + key + ": " + message);
}

std::uint64_t as_uint(const std::string& key, std::string_view text) {
    text = trim(text);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        fail(key, "expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return v;
}

double as_double(const std::string& key, std::string_view text) {
    try {
        const double v = parse_number(text);
        if (std::isnan(v)) fail(key, "value must be a number");
        return v;
    } catch (const std::invalid_argument&) {
        fail(key, "expected a number, got '" + std::string(trim(text)) + "'");
    }
}

bool as_bool(const std::string& key, std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "off" || text == "no") return false;
    fail(key, "expected true or false, got '" + std::string(text) + "'");
}

SizeRange as_range(const std::string& key, std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) fail(key, "expected min,max");
    SizeRange r{as_double(key, parts[0]), as_double(key, parts[1])};
    if (!(r.min_mb > 0.0 && r.min_mb < r.max_mb && std::isfinite(r.max_mb))) {
        fail(key, "range must satisfy 0 < min < max");
    }
    return r;
}

std::vector<std::string> as_list(std::string_view text) {
    std::vector<std::string> out;
    for (auto part : split(text, ',')) {
        part = trim(part);
        if (!part.empty()) out.emplace_back(part);
    }
    return out;
}

std::string fixed(double v, int precision) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision) << v;
    return out.str();
}

}  // namespace

bool CliConfig::wants(const std::string& format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

ConfigEcho CliConfig::echo() const {
    ConfigEcho out;
    for (const auto& spec : setting_specs()) {
        if (!spec.echoed) continue;
        auto it = settings.find(spec.key);
        out.emplace_back(spec.key, it == settings.end() ? spec.default_value : it->second);
    }
    out.emplace_back("effective-threshold", format_number(base.gate.threshold_mb));
    out.emplace_back("effective-load-scale", format_number(base.prob.load_scale_mb));
    out.emplace_back("version", kVersion);
    return out;
}

std::map<std::string, std::string> read_config_settings(std::istream& in) {
    std::map<std::string, std::string> settings;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = std::string_view(line);
        if (const auto hash = text.find('#'); hash != std::string_view::npos) {
            text = text.substr(0, hash);
        }
        text = trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        const auto key = std::string(trim(text.substr(0, eq)));
        if (eq == std::string_view::npos || key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        if (!is_known_key(key)) {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key +
                              "'");
        }
        settings[key] = std::string(trim(text.substr(eq + 1)));
    }
    return settings;
}

CliConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config: cannot read '" + path + "'");
    return resolve_settings(read_config_settings(in));
}

CliConfig resolve_settings(const std::map<std::string, std::string>& overrides) {
    std::map<std::string, std::string> s;
    for (const auto& spec : setting_specs()) s[spec.key] = spec.default_value;
    for (const auto& [key, value] : overrides) {
        if (!is_known_key(key)) throw ConfigError("unknown setting '" + key + "'");
        s[key] = value;
    }

    CliConfig cfg;
    cfg.settings = s;
    RunConfig& run = cfg.base;
    ClusterConfig& cluster = run.cluster;
    WorkloadConfig& workload = run.workload;

    cluster.num_servers = as_uint("servers", s["servers"]);
    if (cluster.num_servers == 0) fail("servers", "must be at least 1");
    cluster.num_clients = as_uint("clients", s["clients"]);
    workload.num_requests = as_uint("requests", s["requests"]);
    workload.windows = as_uint("windows", s["windows"]);
    if (workload.windows == 0) fail("windows", "must be at least 1");
    workload.num_objects = as_uint("objects", s["objects"]);
    if (workload.num_objects == 0) fail("objects", "must be at least 1");

    const auto mix = split(s["mix"], ',');
    if (mix.size() != 3) fail("mix", "expected three weights large,medium,small");
    double mix_sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        workload.mix[i] = as_double("mix", mix[i]);
        if (!(workload.mix[i] >= 0.0)) fail("mix", "weights must be non-negative");
        mix_sum += workload.mix[i];
    }
    if (std::abs(mix_sum - 1.0) > 1e-9) fail("mix", "weights must sum to 1");
    workload.ranges[kLarge] = as_range("large-range", s["large-range"]);
    workload.ranges[kMedium] = as_range("medium-range", s["medium-range"]);
    workload.ranges[kSmall] = as_range("small-range", s["small-range"]);

    cluster.initial_load_mean_mb = as_double("initial-load-mean", s["initial-load-mean"]);
    if (!(cluster.initial_load_mean_mb >= 0.0) || !std::isfinite(cluster.initial_load_mean_mb)) {
        fail("initial-load-mean", "must be a finite non-negative number");
    }
    cluster.initial_load_std_mb = as_double("initial-load-std", s["initial-load-std"]);
    if (!(cluster.initial_load_std_mb >= 0.0) || !std::isfinite(cluster.initial_load_std_mb)) {
        fail("initial-load-std", "must be a finite non-negative number");
    }
    cluster.straggler_fraction = as_double("straggler-fraction", s["straggler-fraction"]);
    if (!(cluster.straggler_fraction >= 0.0 && cluster.straggler_fraction <= 1.0)) {
        fail("straggler-fraction", "must lie in [0, 1]");
    }
    if (cluster.straggler_count() >= cluster.num_servers) {
        fail("straggler-fraction", "floor(fraction * servers) must be below --servers");
    }
    cluster.straggler_factor = as_double("straggler-factor", s["straggler-factor"]);
    if (!(cluster.straggler_factor > 0.0) || !std::isfinite(cluster.straggler_factor)) {
        fail("straggler-factor", "must be positive");
    }

    const double mean_len = workload.mean_request_length_mb();
    run.gate.threshold_mb =
        trim(s["threshold"]) == "auto" ? mean_len : as_double("threshold", s["threshold"]);
    run.prob.load_scale_mb =
        trim(s["load-scale"]) == "auto" ? mean_len : as_double("load-scale", s["load-scale"]);
    if (!(run.prob.load_scale_mb > 0.0) || !std::isfinite(run.prob.load_scale_mb)) {
        fail("load-scale", "must be positive and finite");
    }

    const auto levels = as_uint("nltr-levels", s["nltr-levels"]);
    if (levels >= 63 || (std::uint64_t{1} << levels) > cluster.num_servers) {
        fail("nltr-levels", "2^" + std::to_string(levels) + " sections exceed --servers (" +
                                std::to_string(cluster.num_servers) + "); need 2^n <= servers");
    }
    cfg.nltr_levels = static_cast<unsigned>(levels);

    for (const auto& name : as_list(s["algorithms"])) {
        SchedulerKind kind;
        try {
            kind = SchedulerKind::parse(name, cfg.nltr_levels);
            kind.validate(cluster.num_servers);
        } catch (const std::invalid_argument& e) {
            fail("algorithms", e.what());
        }
        cfg.algorithms.push_back(kind);
    }
    if (cfg.algorithms.empty()) fail("algorithms", "at least one algorithm is required");

    cfg.runs = as_uint("runs", s["runs"]);
    if (cfg.runs == 0) fail("runs", "must be at least 1");
    cfg.base_seed = as_uint("base-seed", s["base-seed"]);
    run.seed = cfg.base_seed;

    run.maintainer.enabled = as_bool("maintainer", s["maintainer"]);
    run.maintainer.budget = as_uint("maintainer-budget", s["maintainer-budget"]);
    run.maintainer.charge_load = as_bool("charge-migration", s["charge-migration"]);

    cfg.bucket_width_mb = as_double("bucket-width", s["bucket-width"]);
    if (!(cfg.bucket_width_mb > 0.0) || !std::isfinite(cfg.bucket_width_mb)) {
        fail("bucket-width", "must be positive");
    }
    cfg.output_dir = std::string(trim(s["output-dir"]));
    if (cfg.output_dir.empty()) fail("output-dir", "must not be empty");
    cfg.formats = as_list(s["formats"]);
    if (cfg.formats.empty()) fail("formats", "at least one format is required");
    for (const auto& f : cfg.formats) {
        if (f != "csv" && f != "json" && f != "svg") fail("formats", "unknown format '" + f + "'");
    }
    cfg.dump_workload = std::string(trim(s["dump-workload"]));
    cfg.workload_file = std::string(trim(s["workload-file"]));
    cfg.threads = static_cast<int>(as_uint("threads", s["threads"]));

    try {
        RunConfig probe = run;
        for (const auto& kind : cfg.algorithms) {
            probe.scheduler = kind;
            probe.validate();
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

bool parse_cli(int argc, const char* const* argv, CliConfig& cfg, std::ostream& out) {
    std::map<std::string, std::string> raw;
    for (const auto& spec : setting_specs()) raw[spec.key] = spec.default_value;

    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        const std::string_view arg = argv[i];
        if (arg == "--config" && i + 1 < argc) config_path = argv[i + 1];
        if (arg.starts_with("--config=")) config_path = std::string(arg.substr(9));
    }
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("--config: cannot read '" + config_path + "'");
        try {
            for (const auto& [key, value] : read_config_settings(in)) raw[key] = value;
        } catch (const ConfigError& e) {
            throw ConfigError("--config " + config_path + ": " + e.what());
        }
    }

    CLI::App app{"Log-assisted straggler-aware I/O scheduling simulator", "lass-sim"};
    app.set_version_flag("--version", kVersion);
    app.add_option("--config", config_path, "flat key = value settings file; flags override it");
    for (const auto& spec : setting_specs()) {
        app.add_option(std::string("--") + spec.key, raw[spec.key], spec.help)
            ->default_str(spec.default_value);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return false;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return false;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    std::map<std::string, std::string> overrides = raw;
    cfg = resolve_settings(overrides);
    return true;
}

namespace {

void ensure_writable_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw ConfigError("--output-dir: cannot create directory '" + dir + "'");
    }
    const auto probe = fs::path(dir) / ".lass-write-probe";
    {
        std::ofstream test(probe);
        if (!test) throw ConfigError("--output-dir: directory '" + dir + "' is not writable");
    }
    fs::remove(probe, ec);
}

struct AlgorithmRun {
    std::string label;
    std::vector<SimulationResult> results;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    std::vector<TimeWindow> fixed_workload;
    try {
        if (!parse_cli(argc, argv, cfg, out)) return 0;
        ensure_writable_dir(cfg.output_dir);
        if (!cfg.workload_file.empty()) {
            try {
                fixed_workload = load_workload(cfg.workload_file);
            } catch (const std::exception& e) {
                throw ConfigError(std::string("--workload-file: ") + e.what());
            }
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return 2;
    }

    try {
        if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
        const std::vector<TimeWindow>* shared = cfg.workload_file.empty() ? nullptr : &fixed_workload;

        if (!cfg.dump_workload.empty()) {
            save_workload(cfg.dump_workload, shared ? fixed_workload : workload_for(cfg.base));
        }

        std::vector<AlgorithmRun> runs;
        for (const auto& kind : cfg.algorithms) {
            RunConfig rc = cfg.base;
            rc.scheduler = kind;
            runs.push_back({kind.label(), run_many(rc, cfg.runs, cfg.base_seed, shared)});
        }

        const ConfigEcho echo = cfg.echo();
        namespace fs = std::filesystem;
        auto path = [&](const std::string& name) { return (fs::path(cfg.output_dir) / name).string(); };

        std::vector<SummaryRow> rows;
        std::vector<HistogramSeries> series;
        std::ostringstream table;
        table << "algorithm,runs,mean_cov,mean_std_load_mb,mean_max_load_mb,straggler_requests,"
                 "runs_with_straggler_hits,steps\n";

        out << std::left << std::setw(8) << "policy" << std::right << std::setw(10) << "mean CoV"
            << std::setw(14) << "mean max MB" << std::setw(16) << "straggler hits" << std::setw(10)
            << "steps" << '\n';
        for (const auto& ar : runs) {
            double cov = 0.0, stddev = 0.0, max_load = 0.0;
            std::size_t hits = 0, hit_runs = 0, steps = 0;
            for (std::size_t i = 0; i < ar.results.size(); ++i) {
                const auto& r = ar.results[i];
                const auto m = summarize(r, ar.label);
                rows.push_back({ar.label, i, r.seed, m, r.redirect_stats});
                cov += m.cov;
                stddev += m.std_load_mb;
                max_load += m.max_load_mb;
                hits += m.straggler_request_count;
                hit_runs += m.straggler_request_count > 0;
                steps += m.total_requests;
            }
            const auto n = static_cast<double>(ar.results.size());
            table << ar.label << ',' << ar.results.size() << ',' << format_number(cov / n) << ','
                  << format_number(stddev / n) << ',' << format_number(max_load / n) << ',' << hits
                  << ',' << hit_runs << ',' << steps << '\n';
            out << std::left << std::setw(8) << ar.label << std::right << std::setw(10)
                << fixed(cov / n, 4) << std::setw(14) << fixed(max_load / n, 1) << std::setw(16)
                << hits << std::setw(10) << steps << '\n';

            const auto hist = load_histogram(ar.results, cfg.bucket_width_mb);
            series.push_back({ar.label, hist});
            const auto avg = average_loads(ar.results);
            if (cfg.wants("csv")) {
                emit_file(path(ar.label + "_loads.csv"), loads_csv(avg, echo));
                emit_file(path(ar.label + "_histogram.csv"), histogram_csv(hist, echo));
            }
            if (cfg.wants("json")) {
                emit_file(path(ar.label + ".json"),
                          results_json(ar.label, ar.results, hist, echo, cfg.base_seed));
            }
            if (cfg.wants("svg")) {
                emit_file(path(ar.label + "_loads.svg"),
                          loads_svg(avg, ar.label + ": average load per server"));
            }
        }

        if (cfg.wants("csv")) {
            emit_file(path("summary.csv"), summary_csv(rows, echo));
            std::ostringstream with_preamble;
            for (const auto& [k, v] : echo) with_preamble << "# " << k << '=' << v << '\n';
            emit_file(path("algorithms.csv"), with_preamble.str() + table.str());
        }
        if (cfg.wants("json")) emit_file(path("summary.json"), summary_json(rows, echo));
        if (cfg.wants("svg")) {
            emit_file(path("comparison_histogram.svg"),
                      histogram_svg(series, "max requests per server by load"));
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace lass
