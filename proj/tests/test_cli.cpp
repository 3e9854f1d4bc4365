#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <stdexcept>
#include <vector>

#include "lass/cli.hpp"

using namespace lass;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("lass_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Invocation {
    int code;
    std::string out, err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "lass-sim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

CliConfig parse(std::vector<std::string> args) {
    args.insert(args.begin(), "lass-sim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    CliConfig cfg;
    std::ostringstream out;
    REQUIRE(parse_cli(static_cast<int>(argv.size()), argv.data(), cfg, out));
    return cfg;
}

}  // namespace

TEST_CASE("an empty config file gives the defaults") {
    std::istringstream empty("");
    const auto cfg = resolve_settings(read_config_settings(empty));
    CHECK(cfg.base.cluster.num_servers == 100);
    CHECK(cfg.base.cluster.num_clients == 200);
    CHECK(cfg.base.workload.num_requests == 2000);
    CHECK(cfg.base.cluster.straggler_fraction == 0.1);
    CHECK(cfg.base.cluster.straggler_factor == 5.0);
    CHECK(cfg.runs == 100);
    CHECK(cfg.algorithms.size() == 5);
    CHECK((cfg.algorithms.back() == SchedulerKind{Policy::nltr, 2}));
    CHECK(cfg.base.gate.threshold_mb == doctest::Approx(cfg.base.workload.mean_request_length_mb()));
}

TEST_CASE("flags override the config file") {
    const auto dir = scratch("override");
    const auto file = dir / "run.conf";
    std::ofstream(file) << "# cluster\nservers = 100\nruns = 3   # few\nthreshold = 12.5\n";
    auto cfg = parse({"--config", file.string(), "--servers", "50"});
    CHECK(cfg.base.cluster.num_servers == 50);
    CHECK(cfg.runs == 3);
    CHECK(cfg.base.gate.threshold_mb == 12.5);
    cfg = parse({"--config=" + file.string()});
    CHECK(cfg.base.cluster.num_servers == 100);
    CHECK(cfg.base.gate.threshold_mb == 12.5);
}

TEST_CASE("config errors cite the offending line") {
    std::istringstream bad("servers = 10\n\n# note\nruns = 2\nmix = 0.2,0.3,0.5\n\nthis line is wrong\n");
    try {
        read_config_settings(bad);
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 7") != std::string::npos);
    }
    std::istringstream unknown("servres = 10\n");
    CHECK_THROWS_WITH_AS(read_config_settings(unknown), doctest::Contains("servres"), ConfigError);
}

TEST_CASE("settings are validated per flag") {
    auto fails_on = [](std::map<std::string, std::string> s, const std::string& flag) {
        try {
            resolve_settings(s);
        } catch (const ConfigError& e) {
            return std::string(e.what()).find("--" + flag) != std::string::npos;
        }
        return false;
    };
    CHECK(fails_on({{"servers", "0"}}, "servers"));
    CHECK(fails_on({{"servers", "-3"}}, "servers"));
    CHECK(fails_on({{"mix", "0.5,0.5,0.5"}}, "mix"));
    CHECK(fails_on({{"nltr-levels", "7"}}, "nltr-levels"));
    CHECK(fails_on({{"servers", "4"}, {"algorithms", "nltr:3"}}, "algorithms"));
    CHECK(fails_on({{"algorithms", "rr,magic"}}, "algorithms"));
    CHECK(fails_on({{"straggler-fraction", "1"}}, "straggler-fraction"));
    CHECK(fails_on({{"large-range", "10"}}, "large-range"));
    CHECK(fails_on({{"load-scale", "0"}}, "load-scale"));
    CHECK(fails_on({{"formats", "csv,pdf"}}, "formats"));
    CHECK(fails_on({{"maintainer", "maybe"}}, "maintainer"));
    CHECK(fails_on({{"threshold", "abc"}}, "threshold"));

    const auto cfg = resolve_settings({{"threshold", "-inf"}, {"algorithms", "nltr"}, {"nltr-levels", "3"}});
    CHECK(cfg.base.gate.threshold_mb == -INFINITY);
    CHECK(cfg.algorithms == std::vector<SchedulerKind>{{Policy::nltr, 3}});
}

TEST_CASE("exit codes") {
    const auto dir = scratch("exit");
    CHECK(invoke({"--help"}).code == 0);
    CHECK(invoke({"--version"}).out == "1.0.0\n");
    const auto bogus = invoke({"--bogus"});
    CHECK(bogus.code == 2);
    CHECK(bogus.err.find("--help") != std::string::npos);
    const auto levels = invoke({"--nltr-levels", "8", "--output-dir", dir.string()});
    CHECK(levels.code == 2);
    CHECK(levels.err.find("--nltr-levels") != std::string::npos);
    CHECK(invoke({"--config", (dir / "missing.conf").string()}).code == 2);
    CHECK(invoke({"--workload-file", (dir / "missing.csv").string(), "--output-dir", dir.string()}).code == 2);

    std::ofstream(dir / "blocker") << "x";
    CHECK(invoke({"--output-dir", (dir / "blocker" / "sub").string(), "--runs", "1"}).code == 2);

    const auto empty = invoke({"--requests", "0", "--runs", "2", "--output-dir", (dir / "empty").string()});
    CHECK(empty.code == 0);
    CHECK(fs::exists(dir / "empty" / "rr_loads.csv"));
}

TEST_CASE("outputs are byte-identical across invocations") {
    const auto dir = scratch("determinism");
    const std::vector<std::string> common{"--servers", "16", "--requests", "300", "--windows", "10",
                                          "--runs", "4", "--base-seed", "5"};
    auto with_dir = [&](const std::string& name) {
        auto a = common;
        a.push_back("--output-dir");
        a.push_back((dir / name).string());
        return a;
    };
    REQUIRE(invoke(with_dir("a")).code == 0);
    auto single = with_dir("b");
    single.push_back("--threads");
    single.push_back("1");
    REQUIRE(invoke(single).code == 0);

    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        const auto name = entry.path().filename();
        CAPTURE(name.string());
        CHECK(slurp(entry.path()) == slurp(dir / "b" / name));
        ++compared;
    }
    CHECK(compared == 5 * 4 + 4);

    const auto summary = slurp(dir / "a" / "rr_loads.csv");
    CHECK(summary.find("# servers=16\n") != std::string::npos);
    CHECK(summary.find("output-dir") == std::string::npos);
}

TEST_CASE("a dumped workload replays to the same results") {
    const auto dir = scratch("replay");
    const std::vector<std::string> common{"--servers", "12", "--requests", "200", "--windows", "8",
                                          "--runs", "1", "--algorithms", "mlml,nltr:1",
                                          "--formats", "json"};
    auto a = common;
    for (const char* x : {"--output-dir", "a", "--dump-workload", "w.csv"}) a.push_back(x);
    a[a.size() - 3] = (dir / "a").string();
    a.back() = (dir / "w.csv").string();
    REQUIRE(invoke(a).code == 0);

    auto b = common;
    for (const char* x : {"--output-dir", "b", "--workload-file", "w.csv"}) b.push_back(x);
    b[b.size() - 3] = (dir / "b").string();
    b.back() = (dir / "w.csv").string();
    REQUIRE(invoke(b).code == 0);

    const auto ja = slurp(dir / "a" / "mlml.json");
    const auto jb = slurp(dir / "b" / "mlml.json");
    const auto loads_a = ja.substr(ja.find("\"runs\": ["));
    const auto loads_b = jb.substr(jb.find("\"runs\": ["));
    CHECK(loads_a == loads_b);
}
