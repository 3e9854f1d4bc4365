#include "lass/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lass/text.hpp"

namespace lass {

namespace {

constexpr std::uint64_t kOffsetAlign = 1ULL << 20;
constexpr std::uint64_t kOffsetSlots = 1024;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x51ed2701ULL));
}

void WorkloadConfig::validate() const {
    double total = 0.0;
    for (double w : mix) {
        if (!(w >= 0.0)) throw std::invalid_argument("size-class mix weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("size-class mix weights must sum to 1");
    }
    for (const auto& r : ranges) {
        if (!(r.min_mb > 0.0) || !(r.min_mb < r.max_mb) || !std::isfinite(r.max_mb)) {
            throw std::invalid_argument("size ranges must satisfy 0 < min < max");
        }
    }
    if (num_objects == 0) throw std::invalid_argument("object count must be positive");
    if (windows == 0) throw std::invalid_argument("window count must be positive");
}

double WorkloadConfig::mean_request_length_mb() const {
    double mean = 0.0;
    for (std::size_t c = 0; c < 3; ++c) mean += mix[c] * ranges[c].midpoint();
    return mean;
}

void ClusterConfig::validate() const {
    if (num_servers == 0) throw std::invalid_argument("server count must be positive");
    if (!(initial_load_mean_mb >= 0.0) || !std::isfinite(initial_load_mean_mb)) {
        throw std::invalid_argument("initial load mean must be non-negative");
    }
    if (!(initial_load_std_mb >= 0.0) || !std::isfinite(initial_load_std_mb)) {
        throw std::invalid_argument("initial load std must be non-negative");
    }
    if (!(straggler_fraction >= 0.0 && straggler_fraction <= 1.0)) {
        throw std::invalid_argument("straggler fraction must lie in [0, 1]");
    }
    if (!(straggler_factor > 0.0) || !std::isfinite(straggler_factor)) {
        throw std::invalid_argument("straggler factor must be positive");
    }
    if (straggler_count() >= num_servers) {
        throw std::invalid_argument("straggler fraction leaves no regular servers");
    }
}

std::size_t ClusterConfig::straggler_count() const {
    return static_cast<std::size_t>(
        std::floor(straggler_fraction * static_cast<double>(num_servers) + 1e-9));
}

std::vector<TimeWindow> gen_requests(const WorkloadConfig& cfg) {
    cfg.validate();
    std::vector<TimeWindow> windows(cfg.windows);
    for (std::size_t w = 0; w < windows.size(); ++w) windows[w].index = w;

    std::mt19937_64 rng(cfg.seed);
    std::discrete_distribution<std::size_t> pick_class(cfg.mix.begin(), cfg.mix.end());
    std::uniform_int_distribution<std::uint64_t> pick_object(0, cfg.num_objects - 1);
    std::uniform_int_distribution<std::size_t> pick_window(0, cfg.windows - 1);
    std::uniform_int_distribution<std::uint64_t> pick_slot(0, kOffsetSlots - 1);

    for (std::size_t i = 0; i < cfg.num_requests; ++i) {
        const auto& range = cfg.ranges[pick_class(rng)];
        std::uniform_real_distribution<double> pick_length(range.min_mb, range.max_mb);
        double length = pick_length(rng);
        while (!(length > range.min_mb && length < range.max_mb)) length = pick_length(rng);

        Request req{pick_object(rng), pick_slot(rng) * kOffsetAlign, length};
        windows[pick_window(rng)].requests.push_back(req);
    }
    return windows;
}

std::vector<double> gen_initial_loads(const ClusterConfig& cfg) {
    cfg.validate();
    std::vector<double> loads(cfg.num_servers, cfg.initial_load_mean_mb);
    if (cfg.initial_load_std_mb == 0.0) return loads;

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> dist(cfg.initial_load_mean_mb, cfg.initial_load_std_mb);
    for (double& l : loads) l = std::max(0.0, dist(rng));
    return loads;
}

StragglerInjection inject_stragglers(std::vector<double> loads, double fraction, double factor,
                                     std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("straggler fraction must lie in [0, 1]");
    }
    if (!(factor > 0.0)) throw std::invalid_argument("straggler factor must be positive");

    const std::size_t m = loads.size();
    const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(m) + 1e-9));
    StragglerInjection out;
    if (count == 0) {
        out.loads = std::move(loads);
        return out;
    }

    std::vector<ServerId> ids(m);
    std::iota(ids.begin(), ids.end(), ServerId{0});
    std::mt19937_64 rng(seed);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(count);
    std::sort(ids.begin(), ids.end());

    std::vector<bool> chosen(m, false);
    for (ServerId id : ids) chosen[id] = true;
    double regular_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (!chosen[i]) regular_sum += loads[i];
    }
    const double regular_mean = count < m ? regular_sum / static_cast<double>(m - count) : 0.0;
    for (ServerId id : ids) loads[id] = factor * regular_mean;

    out.loads = std::move(loads);
    out.stragglers = std::move(ids);
    return out;
}

void write_workload(std::ostream& out, const std::vector<TimeWindow>& windows) {
    out << "# windows=" << windows.size() << '\n';
    out << "# window,object_id,offset,length_mb\n";
    for (const auto& w : windows) {
        for (const auto& r : w.requests) {
            out << w.index << ',' << r.object_id << ',' << r.offset << ','
                << format_number(r.length_mb) << '\n';
        }
    }
}

std::vector<TimeWindow> read_workload(std::istream& in) {
    std::vector<TimeWindow> windows;
    auto ensure = [&](std::size_t count) {
        while (windows.size() < count) windows.push_back({windows.size(), {}});
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) continue;
        try {
            if (text.front() == '#') {
                constexpr std::string_view key = "# windows=";
                if (text.starts_with(key)) {
                    ensure(static_cast<std::size_t>(parse_number(text.substr(key.size()))));
                }
                continue;
            }
            const auto fields = split(text, ',');
            if (fields.size() != 4) throw std::invalid_argument("expected 4 comma-separated fields");
            auto as_uint = [](std::string_view f) {
                std::uint64_t v = 0;
                f = trim(f);
                auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
                if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size()) {
                    throw std::invalid_argument("not a non-negative integer: '" + std::string(f) + "'");
                }
                return v;
            };
            const auto window = static_cast<std::size_t>(as_uint(fields[0]));
            Request req{as_uint(fields[1]), as_uint(fields[2]), parse_number(fields[3])};
            if (!(req.length_mb > 0.0)) throw std::invalid_argument("request length must be positive");
            ensure(window + 1);
            windows[window].requests.push_back(req);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("workload line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return windows;
}

void save_workload(const std::string& path, const std::vector<TimeWindow>& windows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write workload file " + path);
    write_workload(out, windows);
    if (!out) throw std::runtime_error("failed writing workload file " + path);
}

std::vector<TimeWindow> load_workload(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read workload file " + path);
    return read_workload(in);
}

}  // namespace lass
