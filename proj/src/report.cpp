#include "lass/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lass/text.hpp"

namespace lass {

using ojson = nlohmann::ordered_json;

std::vector<double> average_loads(std::span<const SimulationResult> results) {
    if (results.empty()) throw std::invalid_argument("no results to average");
    const std::size_t m = results.front().num_servers();
    std::vector<double> avg(m, 0.0);
    for (const auto& r : results) {
        if (r.num_servers() != m) {
            throw std::invalid_argument("results disagree on server count");
        }
        for (std::size_t i = 0; i < m; ++i) avg[i] += r.final_loads[i];
    }
    for (double& v : avg) v /= static_cast<double>(results.size());
    return avg;
}

LoadHistogram load_histogram(std::span<const SimulationResult> results, double bucket_width_mb) {
    if (!(bucket_width_mb > 0.0)) throw std::invalid_argument("bucket width must be positive");
    std::map<long long, LoadBucket> buckets;
    for (const auto& r : results) {
        for (std::size_t s = 0; s < r.num_servers(); ++s) {
            const auto key = static_cast<long long>(std::floor(r.final_loads[s] / bucket_width_mb));
            auto& b = buckets[key];
            b.lo_mb = static_cast<double>(key) * bucket_width_mb;
            b.hi_mb = static_cast<double>(key + 1) * bucket_width_mb;
            ++b.servers;
            b.max_requests = std::max(b.max_requests, r.request_counts[s]);
        }
    }
    LoadHistogram hist{bucket_width_mb, {}};
    for (const auto& [key, b] : buckets) hist.buckets.push_back(b);
    return hist;
}

LoadHistogram load_histogram(const SimulationResult& result, double bucket_width_mb) {
    return load_histogram(std::span<const SimulationResult>(&result, 1), bucket_width_mb);
}

std::size_t straggler_hits(const SimulationResult& result) {
    std::size_t hits = 0;
    for (ServerId s : result.straggler_ids) hits += result.request_counts.at(s);
    return hits;
}

LoadStats load_stats(std::span<const double> loads) {
    LoadStats st;
    if (loads.empty()) return st;
    const auto n = static_cast<double>(loads.size());
    double sum = 0.0;
    for (double l : loads) sum += l;
    st.mean = sum / n;
    double sq = 0.0;
    for (double l : loads) sq += (l - st.mean) * (l - st.mean);
    st.stddev = std::sqrt(sq / n);
    st.cov = st.mean > 0.0 ? st.stddev / st.mean : 0.0;
    st.max = *std::max_element(loads.begin(), loads.end());
    return st;
}

MetricsSummary summarize(const SimulationResult& result, std::string label) {
    const LoadStats st = load_stats(result.final_loads);
    MetricsSummary out;
    out.label = std::move(label);
    out.mean_load_mb = st.mean;
    out.std_load_mb = st.stddev;
    out.cov = st.cov;
    out.max_load_mb = st.max;
    out.straggler_request_count = straggler_hits(result);
    out.total_requests = result.decisions.size();
    return out;
}

namespace {

void write_preamble(std::ostringstream& out, const ConfigEcho& preamble) {
    for (const auto& [key, value] : preamble) out << "# " << key << '=' << value << '\n';
}

ojson config_json(const ConfigEcho& config) {
    ojson obj = ojson::object();
    for (const auto& [key, value] : config) obj[key] = value;
    return obj;
}

ojson metrics_json(const MetricsSummary& m) {
    return ojson{{"mean_load_mb", m.mean_load_mb},
                 {"std_load_mb", m.std_load_mb},
                 {"cov", m.cov},
                 {"max_load_mb", m.max_load_mb},
                 {"straggler_requests", m.straggler_request_count},
                 {"steps", m.total_requests}};
}

ojson redirects_json(const RedirectStats& r) {
    return ojson{{"entries_created", r.entries_created},
                 {"live_entries", r.live_entries},
                 {"redirected_mb", r.redirected_mb},
                 {"migrated_mb", r.migrated_mb}};
}

}  // namespace

std::string loads_csv(std::span<const double> loads, const ConfigEcho& preamble) {
    std::ostringstream out;
    write_preamble(out, preamble);
    out << "server,load_mb\n";
    for (std::size_t i = 0; i < loads.size(); ++i) out << i << ',' << format_number(loads[i]) << '\n';
    return out.str();
}

std::string histogram_csv(const LoadHistogram& hist, const ConfigEcho& preamble) {
    std::ostringstream out;
    write_preamble(out, preamble);
    out << "load_lo_mb,load_hi_mb,servers,max_requests\n";
    for (const auto& b : hist.buckets) {
        out << format_number(b.lo_mb) << ',' << format_number(b.hi_mb) << ',' << b.servers << ','
            << b.max_requests << '\n';
    }
    return out.str();
}

std::string summary_csv(std::span<const SummaryRow> rows, const ConfigEcho& preamble) {
    std::ostringstream out;
    write_preamble(out, preamble);
    out << "algorithm,run,seed,mean_load_mb,std_load_mb,cov,max_load_mb,straggler_requests,steps,"
           "redirect_entries,redirected_mb,migrated_mb\n";
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        out << r.algorithm << ',' << r.run << ',' << r.seed << ',' << format_number(m.mean_load_mb)
            << ',' << format_number(m.std_load_mb) << ',' << format_number(m.cov) << ','
            << format_number(m.max_load_mb) << ',' << m.straggler_request_count << ','
            << m.total_requests << ',' << r.redirects.entries_created << ','
            << format_number(r.redirects.redirected_mb) << ','
            << format_number(r.redirects.migrated_mb) << '\n';
    }
    return out.str();
}

CsvTable parse_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> fields;
        for (auto f : split(line, ',')) fields.emplace_back(f);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

std::string results_json(const std::string& algorithm, std::span<const SimulationResult> results,
                         const LoadHistogram& hist, const ConfigEcho& config,
                         std::uint64_t base_seed) {
    ojson doc;
    doc["algorithm"] = algorithm;
    doc["config"] = config_json(config);
    doc["base_seed"] = base_seed;
    ojson seeds = ojson::array();
    for (const auto& r : results) seeds.push_back(r.seed);
    doc["seeds"] = seeds;
    doc["average_loads_mb"] = results.empty() ? std::vector<double>{} : average_loads(results);

    ojson buckets = ojson::array();
    for (const auto& b : hist.buckets) {
        buckets.push_back({{"load_lo_mb", b.lo_mb},
                           {"load_hi_mb", b.hi_mb},
                           {"servers", b.servers},
                           {"max_requests", b.max_requests}});
    }
    doc["histogram"] = {{"bucket_width_mb", hist.bucket_width_mb}, {"buckets", buckets}};

    ojson runs = ojson::array();
    for (const auto& r : results) {
        runs.push_back({{"seed", r.seed},
                        {"metrics", metrics_json(summarize(r, algorithm))},
                        {"redirects", redirects_json(r.redirect_stats)},
                        {"scheduled_mb", r.scheduled_mb},
                        {"straggler_ids", r.straggler_ids},
                        {"initial_loads_mb", r.initial_loads},
                        {"final_loads_mb", r.final_loads},
                        {"request_counts", r.request_counts}});
    }
    doc["runs"] = runs;
    return doc.dump(2) + "\n";
}

std::string summary_json(std::span<const SummaryRow> rows, const ConfigEcho& config) {
    ojson doc;
    doc["config"] = config_json(config);
    ojson out = ojson::array();
    for (const auto& r : rows) {
        out.push_back({{"algorithm", r.algorithm},
                       {"run", r.run},
                       {"seed", r.seed},
                       {"metrics", metrics_json(r.metrics)},
                       {"redirects", redirects_json(r.redirects)}});
    }
    doc["rows"] = out;
    return doc.dump(2) + "\n";
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c",
                                              "#ff7f0e", "#9467bd", "#8c564b"};

std::string fixed(double v) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(2);
    out << v;
    return out.str();
}

std::string escape_xml(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

void svg_open(std::ostringstream& out, const std::string& title) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<!-- lass-sim " << kVersion << " -->\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\" "
           "viewBox=\"0 0 800 400\">\n"
        << "<rect width=\"800\" height=\"400\" fill=\"white\"/>\n"
        << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">"
        << escape_xml(title) << "</text>\n";
}

void svg_axes(std::ostringstream& out, const std::string& xlabel, const std::string& ylabel,
              double ymax) {
    const double x0 = kLeft, y0 = kHeight - kBottom;
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << kWidth - kRight << "\" y2=\""
        << y0 << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << x0 << "\" y1=\"" << kTop << "\" x2=\"" << x0 << "\" y2=\"" << y0
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"400\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape_xml(xlabel) << "</text>\n"
        << "<text x=\"16\" y=\"" << (kTop + y0) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 16 "
        << (kTop + y0) / 2 << ")\">" << escape_xml(ylabel) << "</text>\n"
        << "<text x=\"" << x0 - 4 << "\" y=\"" << kTop + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fixed(ymax)
        << "</text>\n"
        << "<text x=\"" << x0 - 4 << "\" y=\"" << y0
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">0</text>\n";
}

}  // namespace

std::string loads_svg(std::span<const double> loads, const std::string& title) {
    std::ostringstream out;
    svg_open(out, title);
    double ymax = 0.0;
    for (double l : loads) ymax = std::max(ymax, l);
    if (ymax <= 0.0) ymax = 1.0;
    svg_axes(out, "storage server", "load (MB)", ymax);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const double bar_w = loads.empty() ? 0.0 : plot_w / static_cast<double>(loads.size());
    for (std::size_t i = 0; i < loads.size(); ++i) {
        const double h = plot_h * loads[i] / ymax;
        out << "<rect x=\"" << fixed(kLeft + bar_w * static_cast<double>(i)) << "\" y=\""
            << fixed(kTop + plot_h - h) << "\" width=\"" << fixed(std::max(bar_w * 0.8, 0.5))
            << "\" height=\"" << fixed(h) << "\" fill=\"" << kPalette[0] << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string histogram_svg(std::span<const HistogramSeries> series, const std::string& title) {
    std::ostringstream out;
    svg_open(out, title);
    double xmax = 0.0, ymax = 0.0;
    for (const auto& s : series) {
        for (const auto& b : s.hist.buckets) {
            xmax = std::max(xmax, b.hi_mb);
            ymax = std::max(ymax, static_cast<double>(b.max_requests));
        }
    }
    if (xmax <= 0.0) xmax = 1.0;
    if (ymax <= 0.0) ymax = 1.0;
    svg_axes(out, "server load (MB, bucketed)", "max requests on a server", ymax);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return fixed(kLeft + plot_w * x / xmax); };
    auto py = [&](double y) { return fixed(kTop + plot_h - plot_h * y / ymax); };

    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = kPalette[k % kPalette.size()];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& b : series[k].hist.buckets) {
            const auto y = static_cast<double>(b.max_requests);
            out << px(b.lo_mb) << ',' << py(y) << ' ' << px(b.hi_mb) << ',' << py(y) << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << kWidth - kRight - 4 << "\" y=\"" << kTop + 14 * static_cast<double>(k)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color
            << "\">" << escape_xml(series[k].label) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void emit_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing output file " + path);
}

}  // namespace lass
