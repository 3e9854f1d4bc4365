#include "lass/redirect.hpp"

#include <algorithm>
#include <stdexcept>

namespace lass {

RedirectTables::RedirectTables(std::size_t num_servers) : tables_(num_servers) {
    for (std::size_t i = 0; i < num_servers; ++i) tables_[i].owner_server = i;
}

std::size_t RedirectTables::live_entries() const {
    std::size_t n = 0;
    for (const auto& t : tables_) n += t.entries.size();
    return n;
}

void record_redirect(RedirectTables& tables, const ScheduleDecision& decision,
                     std::span<const Request> requests) {
    if (!decision.redirected || decision.chosen_server == decision.default_server) {
        throw std::invalid_argument("record_redirect called with a non-redirected decision");
    }
    auto& entries = tables.table(decision.default_server).entries;
    for (const Request& req : requests) {
        std::erase_if(entries, [&](const RedirectEntry& e) {
            return e.object_id == req.object_id && e.offset == req.offset;
        });
        entries.push_back({req.object_id, req.offset, req.length_mb, decision.chosen_server});
    }
}

ReadLocation resolve_read(const RedirectTables& tables, ObjectId object_id, std::uint64_t offset,
                          std::size_t num_servers) {
    const ServerId def = default_server_for(object_id, num_servers);
    if (def < tables.num_servers()) {
        for (const auto& e : tables.table(def).entries) {
            if (e.object_id == object_id && e.offset == offset) return {e.actual_server, true};
        }
    }
    return {def, false};
}

FlushResult maintainer_flush(RedirectTables& tables, bool idle_window, std::size_t budget) {
    FlushResult out;
    if (!idle_window) return out;
    bool progress = true;
    while (budget > 0 && progress) {
        progress = false;
        for (ServerId s = 0; s < tables.num_servers() && budget > 0; ++s) {
            auto& entries = tables.table(s).entries;
            if (entries.empty()) continue;
            out.migrated_mb += entries.front().length_mb;
            out.migrated.push_back({s, entries.front()});
            entries.pop_front();
            --budget;
            progress = true;
        }
    }
    return out;
}

}  // namespace lass
