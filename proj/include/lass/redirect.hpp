#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "lass/core.hpp"

namespace lass {

struct RedirectEntry {
    ObjectId object_id = 0;
    std::uint64_t offset = 0;
    double length_mb = 0.0;
    ServerId actual_server = 0;
};

/// Redirect table kept on a default server. Entries are in insertion order,
/// which is also the maintainer's migration order.
struct RedirectTable {
    ServerId owner_server = 0;
    std::deque<RedirectEntry> entries;
};

/// One table per server, indexed by owner id.
class RedirectTables {
public:
    explicit RedirectTables(std::size_t num_servers);

    std::size_t num_servers() const { return tables_.size(); }
    const RedirectTable& table(ServerId owner) const { return tables_.at(owner); }
    RedirectTable& table(ServerId owner) { return tables_.at(owner); }
    std::size_t live_entries() const;

private:
    std::vector<RedirectTable> tables_;
};

/// Upserts one entry per request of a redirected step into the default
/// server's table. Throws std::invalid_argument for a non-redirected decision.
void record_redirect(RedirectTables& tables, const ScheduleDecision& decision,
                     std::span<const Request> requests);

struct ReadLocation {
    ServerId server = 0;
    bool redirected = false;
    friend bool operator==(const ReadLocation&, const ReadLocation&) = default;
};

ReadLocation resolve_read(const RedirectTables& tables, ObjectId object_id, std::uint64_t offset,
                          std::size_t num_servers);

struct MigratedEntry {
    ServerId default_server = 0;
    RedirectEntry entry;
};

struct FlushResult {
    double migrated_mb = 0.0;
    std::vector<MigratedEntry> migrated;
};

/// Moves up to `budget` entries back to their default servers when the window
/// is idle: oldest entry of each table first, visiting tables round-robin.
FlushResult maintainer_flush(RedirectTables& tables, bool idle_window, std::size_t budget);

}  // namespace lass
