#include "lass/prob_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lass {

namespace {

constexpr double kSumTolerance = 1e-9;

void check_server(const StatisticLog& log, ServerId server) {
    if (server >= log.num_servers()) {
        throw std::invalid_argument("server id " + std::to_string(server) + " out of range [0, " +
                                    std::to_string(log.num_servers()) + ")");
    }
}

template <typename Key>
std::vector<ServerId> order_desc(std::size_t n, const Key& key) {
    std::vector<ServerId> ids(n);
    std::iota(ids.begin(), ids.end(), ServerId{0});
    std::stable_sort(ids.begin(), ids.end(),
                     [&](ServerId a, ServerId b) { return key(a) > key(b); });
    return ids;
}

}  // namespace

void ProbConfig::validate() const {
    if (!(load_scale_mb > 0.0) || !std::isfinite(load_scale_mb)) {
        throw std::invalid_argument("load scale must be a positive finite number of MB");
    }
}

void update_load(StatisticLog& log, ServerId server, double length_mb) {
    check_server(log, server);
    if (!(length_mb >= 0.0)) {
        throw std::invalid_argument("scheduled length must be non-negative");
    }
    log.server(server).load_mb += length_mb;
}

void apply_selection(StatisticLog& log, ServerId chosen, const ProbConfig& cfg) {
    check_server(log, chosen);
    const std::size_t m = log.num_servers();
    if (m == 1) return;

    auto servers = log.servers();
    const double before = servers[chosen].prob;
    const double after = before * std::exp(-servers[chosen].load_mb / cfg.load_scale_mb);
    const double share = (before - after) / static_cast<double>(m - 1);
    // min(): with M=2 the survivor can round a few ulps past one.
    for (auto& s : servers) {
        s.prob = (s.server_id == chosen) ? after : std::min(s.prob + share, 1.0);
    }

    const double sum = log.prob_sum();
    if (std::abs(sum - 1.0) > kSumTolerance) {
        for (auto& s : servers) s.prob /= sum;
    }
}

void commit_decision(StatisticLog& log, ServerId chosen, double length_mb, const ProbConfig& cfg) {
    update_load(log, chosen, length_mb);
    apply_selection(log, chosen, cfg);
}

std::vector<ServerId> servers_by_prob_desc(const StatisticLog& log) {
    return order_desc(log.num_servers(), [&](ServerId id) { return log.prob(id); });
}

std::vector<double> selection_log_scores(const StatisticLog& log, const ProbConfig& cfg) {
    std::vector<double> scores;
    scores.reserve(log.num_servers());
    for (const auto& s : log.servers()) {
        const double lp =
            s.prob > 0.0 ? std::log(s.prob) : -std::numeric_limits<double>::infinity();
        scores.push_back(lp - s.load_mb / cfg.load_scale_mb);
    }
    return scores;
}

std::vector<ServerId> servers_by_score_desc(const StatisticLog& log, const ProbConfig& cfg) {
    const auto scores = selection_log_scores(log, cfg);
    return order_desc(scores.size(), [&](ServerId id) { return scores[id]; });
}

}  // namespace lass
