#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "lass/core.hpp"

using namespace lass;

TEST_CASE("new_statistic_log gives a uniform prior") {
    SUBCASE("four idle servers") {
        const std::vector<double> loads(4, 0.0);
        const auto log = new_statistic_log(4, loads);
        for (double p : log.probs()) CHECK(p == 0.25);
        CHECK(log.prob_sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("single server") {
        const std::vector<double> loads{5.0};
        const auto log = new_statistic_log(1, loads);
        CHECK(log.prob(0) == 1.0);
        CHECK(log.load(0) == 5.0);
    }
    SUBCASE("hundred servers") {
        const std::vector<double> loads(100, 0.0);
        const auto log = new_statistic_log(100, loads);
        for (double p : log.probs()) CHECK(p == doctest::Approx(0.01).epsilon(1e-15));
        CHECK(std::abs(log.prob_sum() - 1.0) <= 1e-9);
    }
    SUBCASE("loads are copied") {
        const std::vector<double> loads{1.0, 2.5, 0.0};
        CHECK(new_statistic_log(3, loads).loads() == loads);
    }
}

TEST_CASE("new_statistic_log rejects bad input") {
    const std::vector<double> none;
    CHECK_THROWS_AS(new_statistic_log(0, none), std::invalid_argument);
    const std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(new_statistic_log(3, two), std::invalid_argument);
    const std::vector<double> negative{1.0, -2.0};
    CHECK_THROWS_AS(new_statistic_log(2, negative), std::invalid_argument);
}

TEST_CASE("group_into_steps") {
    SUBCASE("objects 1,2,1 give two steps in first-appearance order") {
        TimeWindow w{0, {{1, 0, 2.0}, {2, 0, 3.0}, {1, 4096, 5.0}}};
        const auto steps = group_into_steps(w);
        REQUIRE(steps.size() == 2);
        CHECK(steps[0].object_id == 1);
        CHECK(steps[0].requests.size() == 2);
        CHECK(steps[0].total_length_mb == 7.0);
        CHECK(steps[0].requests[1].offset == 4096);
        CHECK(steps[1].object_id == 2);
        CHECK(steps[1].requests.size() == 1);
    }
    SUBCASE("empty window") {
        CHECK(group_into_steps(TimeWindow{}).empty());
    }
    SUBCASE("a file write split over two objects is two steps") {
        TimeWindow w{3, {{10, 0, 4.0}, {11, 0, 2.0}}};
        const auto steps = group_into_steps(w);
        REQUIRE(steps.size() == 2);
        CHECK(steps[0].object_id == 10);
        CHECK(steps[1].object_id == 11);
    }
}

TEST_CASE("group_into_steps conserves requests and length") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<ObjectId> obj(0, 9);
    std::uniform_real_distribution<double> len(0.1, 50.0);
    for (int trial = 0; trial < 200; ++trial) {
        TimeWindow w;
        const int n = trial % 40;
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            w.requests.push_back({obj(rng), static_cast<std::uint64_t>(i), len(rng)});
            total += w.requests.back().length_mb;
        }
        const auto steps = group_into_steps(w);
        std::size_t count = 0;
        double sum = 0.0;
        for (const auto& s : steps) {
            double member_sum = 0.0;
            for (const auto& r : s.requests) {
                CHECK(r.object_id == s.object_id);
                member_sum += r.length_mb;
            }
            CHECK(s.total_length_mb == doctest::Approx(member_sum).epsilon(1e-12));
            count += s.requests.size();
            sum += s.total_length_mb;
        }
        CHECK(count == w.requests.size());
        CHECK(sum == doctest::Approx(total).epsilon(1e-12));

        const auto again = group_into_steps(w);
        REQUIRE(again.size() == steps.size());
        for (std::size_t i = 0; i < steps.size(); ++i) {
            CHECK(again[i].object_id == steps[i].object_id);
            CHECK(again[i].requests == steps[i].requests);
        }
    }
}

TEST_CASE("make_decision marks redirects") {
    Step s{9, {{9, 0, 3.0}}, 3.0};
    CHECK_FALSE(make_decision(s, 4, 4, 4).redirected);
    CHECK_FALSE(make_decision(s, 4, 1, 4).redirected);
    const auto d = make_decision(s, 4, 1, 1);
    CHECK(d.redirected);
    CHECK(d.length_mb == 3.0);
    CHECK(d.step_object_id == 9);
}
