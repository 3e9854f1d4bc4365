#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lass/simulator.hpp"

using namespace lass;

namespace {

RunConfig small_config(const char* algorithm) {
    RunConfig cfg;
    cfg.cluster.num_servers = 20;
    cfg.workload.num_requests = 400;
    cfg.workload.windows = 20;
    cfg.workload.num_objects = 5000;
    cfg.scheduler = SchedulerKind::parse(algorithm);
    cfg.seed = 7;
    return RunConfig::with_workload_defaults(cfg);
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("RR balances one request per object evenly") {
    RunConfig cfg;
    cfg.cluster.num_servers = 5;
    cfg.cluster.initial_load_std_mb = 0.0;
    cfg.cluster.straggler_fraction = 0.0;
    cfg.scheduler = SchedulerKind::parse("rr");
    std::vector<TimeWindow> w{{0, {}}};
    for (ObjectId o = 0; o < 10; ++o) w[0].requests.push_back({o, 0, 3.0});
    const auto r = run(cfg, w);
    for (double l : r.final_loads) CHECK(l == 206.0);
    for (std::size_t c : r.request_counts) CHECK(c == 2);
    CHECK(r.redirect_stats.entries_created == 0);
}

TEST_CASE("zero requests leave loads unchanged") {
    auto cfg = small_config("nltr:2");
    cfg.workload.num_requests = 0;
    const auto r = run(cfg);
    CHECK(r.final_loads == r.initial_loads);
    CHECK(r.decisions.empty());
}

TEST_CASE("every policy sees the same cluster for a seed") {
    const auto a = run(small_config("rr"));
    const auto b = run(small_config("mlml"));
    const auto c = run(small_config("nltr:1"));
    CHECK(a.initial_loads == b.initial_loads);
    CHECK(a.initial_loads == c.initial_loads);
    CHECK(a.straggler_ids == b.straggler_ids);
    CHECK(a.straggler_ids.size() == 2);
}

TEST_CASE("load is conserved") {
    for (const char* alg : {"rr", "mlml", "trh", "nltr:1", "nltr:2"}) {
        CAPTURE(alg);
        const auto r = run(small_config(alg));
        double lengths = 0.0;
        for (const auto& d : r.decisions) lengths += d.length_mb;
        CHECK(lengths == doctest::Approx(r.scheduled_mb).epsilon(1e-12));
        CHECK(sum(r.final_loads) == doctest::Approx(sum(r.initial_loads) + r.scheduled_mb).epsilon(1e-9));
        CHECK(std::accumulate(r.request_counts.begin(), r.request_counts.end(), std::size_t{0}) ==
              r.decisions.size());
        for (std::size_t i = 0; i < r.num_servers(); ++i) CHECK(r.final_loads[i] >= r.initial_loads[i]);
    }
}

TEST_CASE("runs are deterministic and parallel equals serial") {
    for (const char* alg : {"trh", "nltr:2"}) {
        const auto cfg = small_config(alg);
        const auto a = run(cfg);
        const auto b = run(cfg);
        CHECK(a.decisions == b.decisions);
        CHECK(a.final_loads == b.final_loads);

        const auto par = run_many(cfg, 6, 100);
        const auto ser = run_many_serial(cfg, 6, 100);
        REQUIRE(par.size() == 6);
        for (std::size_t i = 0; i < 6; ++i) {
            CHECK(par[i].seed == 100 + i);
            CHECK(par[i].final_loads == ser[i].final_loads);
            CHECK(par[i].decisions == ser[i].decisions);
        }
        CHECK(par[0].final_loads != par[1].final_loads);
    }
    CHECK_THROWS_AS(run_many(small_config("rr"), 0, 1), std::invalid_argument);
}

TEST_CASE("a shared workload is replayed by every run") {
    const auto cfg = small_config("mlml");
    const auto w = workload_for(cfg);
    const auto rs = run_many(cfg, 3, 1, &w);
    for (const auto& r : rs) CHECK(r.scheduled_mb == doctest::Approx(rs[0].scheduled_mb));
}

TEST_CASE("maintainer") {
    auto cfg = small_config("mlml");
    cfg.cluster.num_servers = 10;
    std::vector<TimeWindow> w{{0, {}}, {1, {}}, {2, {}}};
    for (ObjectId o = 0; o < 40; ++o) w[0].requests.push_back({o, 0, 1.0 + static_cast<double>(o % 5)});
    const auto busy = run(cfg, std::vector<TimeWindow>{w[0]});
    REQUIRE(busy.redirect_stats.entries_created > 0);
    CHECK(busy.redirect_stats.live_entries == busy.redirect_stats.entries_created);

    SUBCASE("idle windows migrate entries back") {
        cfg.maintainer.budget = 1000;
        const auto r = run(cfg, w);
        CHECK(r.redirect_stats.live_entries == 0);
        CHECK(r.redirect_stats.migrated_mb == doctest::Approx(r.redirect_stats.redirected_mb));
        CHECK(r.final_loads == busy.final_loads);
    }
    SUBCASE("a budget limits each idle window") {
        cfg.maintainer.budget = 1;
        const auto r = run(cfg, w);
        CHECK(r.redirect_stats.live_entries + 2 == busy.redirect_stats.entries_created);
    }
    SUBCASE("disabled") {
        cfg.maintainer.enabled = false;
        CHECK(run(cfg, w).redirect_stats.live_entries == busy.redirect_stats.entries_created);
    }
    SUBCASE("charging migrations adds their length to the default servers") {
        cfg.maintainer.budget = 1000;
        cfg.maintainer.charge_load = true;
        const auto r = run(cfg, w);
        CHECK(sum(r.final_loads) ==
              doctest::Approx(sum(r.initial_loads) + r.scheduled_mb + r.redirect_stats.migrated_mb));
    }
}

TEST_CASE("invalid configurations are rejected") {
    auto cfg = small_config("nltr:5");
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg = small_config("rr");
    cfg.gate.threshold_mb = NAN;
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg = small_config("rr");
    cfg.prob.load_scale_mb = 0.0;
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
}
