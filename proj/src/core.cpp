#include "lass/core.hpp"

#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace lass {

StatisticLog::StatisticLog(std::size_t num_servers, std::span<const double> initial_loads) {
    if (num_servers == 0) {
        throw std::invalid_argument("statistic log needs at least one server");
    }
    if (initial_loads.size() != num_servers) {
        throw std::invalid_argument("initial load count " + std::to_string(initial_loads.size()) +
                                    " does not match server count " + std::to_string(num_servers));
    }
    servers_.resize(num_servers);
    const double prior = 1.0 / static_cast<double>(num_servers);
    for (std::size_t i = 0; i < num_servers; ++i) {
        if (!(initial_loads[i] >= 0.0)) {
            throw std::invalid_argument("initial load of server " + std::to_string(i) +
                                        " must be non-negative");
        }
        servers_[i] = {i, initial_loads[i], prior};
    }
}

std::vector<double> StatisticLog::loads() const {
    std::vector<double> out;
    out.reserve(servers_.size());
    for (const auto& s : servers_) out.push_back(s.load_mb);
    return out;
}

std::vector<double> StatisticLog::probs() const {
    std::vector<double> out;
    out.reserve(servers_.size());
    for (const auto& s : servers_) out.push_back(s.prob);
    return out;
}

double StatisticLog::prob_sum() const {
    return std::accumulate(servers_.begin(), servers_.end(), 0.0,
                           [](double acc, const ServerStatEntry& s) { return acc + s.prob; });
}

StatisticLog new_statistic_log(std::size_t num_servers, std::span<const double> initial_loads) {
    return StatisticLog(num_servers, initial_loads);
}

ScheduleDecision make_decision(const Step& step, ServerId default_server, ServerId target_server,
                               ServerId chosen_server) {
    return {step.object_id, step.total_length_mb, default_server, target_server, chosen_server,
            chosen_server != default_server};
}

std::vector<Step> group_into_steps(const TimeWindow& window) {
    std::vector<Step> steps;
    std::unordered_map<ObjectId, std::size_t> slot;
    for (const auto& req : window.requests) {
        auto [it, inserted] = slot.try_emplace(req.object_id, steps.size());
        if (inserted) {
            steps.push_back({req.object_id, {}, 0.0});
        }
        Step& step = steps[it->second];
        step.requests.push_back(req);
        step.total_length_mb += req.length_mb;
    }
    return steps;
}

}  // namespace lass
