#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lass {

using ServerId = std::size_t;
using ObjectId = std::uint64_t;

/// One object I/O as seen by the client. Requests that span object
/// boundaries are split before they reach the scheduler.
struct Request {
    ObjectId object_id = 0;
    std::uint64_t offset = 0;  // bytes from object start
    double length_mb = 0.0;

    friend bool operator==(const Request&, const Request&) = default;
};

/// Row of the server statistic table.
struct ServerStatEntry {
    ServerId server_id = 0;
    double load_mb = 0.0;
    double prob = 0.0;
};

/// Client-side log: pending requests of the current window plus the
/// per-server statistic table. The table size is fixed for a run.
class StatisticLog {
public:
    StatisticLog(std::size_t num_servers, std::span<const double> initial_loads);

    std::size_t num_servers() const { return servers_.size(); }

    const ServerStatEntry& server(ServerId id) const { return servers_.at(id); }
    ServerStatEntry& server(ServerId id) { return servers_.at(id); }
    std::span<const ServerStatEntry> servers() const { return servers_; }
    std::span<ServerStatEntry> servers() { return servers_; }

    double load(ServerId id) const { return servers_.at(id).load_mb; }
    double prob(ServerId id) const { return servers_.at(id).prob; }

    std::vector<double> loads() const;
    std::vector<double> probs() const;
    double prob_sum() const;

    std::vector<Request>& pending() { return pending_; }
    const std::vector<Request>& pending() const { return pending_; }

private:
    std::vector<ServerStatEntry> servers_;
    std::vector<Request> pending_;
};

/// Uniform prior p = 1/M over the given initial loads.
/// Throws std::invalid_argument on M == 0, a length mismatch or a negative load.
StatisticLog new_statistic_log(std::size_t num_servers, std::span<const double> initial_loads);

struct TimeWindow {
    std::size_t index = 0;
    std::vector<Request> requests;
};

/// All requests of one window that touch the same object.
struct Step {
    ObjectId object_id = 0;
    std::vector<Request> requests;
    double total_length_mb = 0.0;
};

struct ScheduleDecision {
    ObjectId step_object_id = 0;
    double length_mb = 0.0;
    ServerId default_server = 0;
    ServerId target_server = 0;  // policy proposal before the benefit gate
    ServerId chosen_server = 0;
    bool redirected = false;

    friend bool operator==(const ScheduleDecision&, const ScheduleDecision&) = default;
};

ScheduleDecision make_decision(const Step& step, ServerId default_server, ServerId target_server,
                               ServerId chosen_server);

/// Groups a window into steps, one per distinct object, in order of first
/// appearance. Request order inside each step follows the window.
std::vector<Step> group_into_steps(const TimeWindow& window);

inline ServerId default_server_for(ObjectId object_id, std::size_t num_servers) {
    return static_cast<ServerId>(object_id % num_servers);
}

}  // namespace lass
