#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "lass/redirect.hpp"

using namespace lass;

namespace {

ScheduleDecision moved(ObjectId obj, double len, ServerId def, ServerId to) {
    return ScheduleDecision{obj, len, def, to, to, true};
}

}  // namespace

TEST_CASE("a redirected step leaves one entry per request on its default server") {
    RedirectTables tables(4);
    const std::vector<Request> reqs{{6, 0, 2.0}, {6, 1048576, 3.0}};
    record_redirect(tables, moved(6, 5.0, 2, 0), reqs);
    REQUIRE(tables.table(2).entries.size() == 2);
    CHECK(tables.table(2).owner_server == 2);
    CHECK(tables.table(2).entries[1].offset == 1048576);
    CHECK(tables.table(2).entries[0].actual_server == 0);
    CHECK(tables.live_entries() == 2);

    CHECK(resolve_read(tables, 6, 0, 4) == ReadLocation{0, true});
    CHECK(resolve_read(tables, 6, 42, 4) == ReadLocation{2, false});
    CHECK(resolve_read(tables, 7, 0, 4) == ReadLocation{3, false});
}

TEST_CASE("re-redirecting the same request replaces its entry") {
    RedirectTables tables(3);
    const std::vector<Request> reqs{{4, 0, 1.0}};
    record_redirect(tables, moved(4, 1.0, 1, 0), reqs);
    record_redirect(tables, moved(4, 1.0, 1, 2), reqs);
    REQUIRE(tables.table(1).entries.size() == 1);
    CHECK(resolve_read(tables, 4, 0, 3).server == 2);
}

TEST_CASE("record_redirect rejects a decision that kept its default") {
    RedirectTables tables(2);
    const std::vector<Request> reqs{{1, 0, 1.0}};
    CHECK_THROWS_AS(record_redirect(tables, ScheduleDecision{1, 1.0, 1, 0, 1, false}, reqs),
                    std::invalid_argument);
    CHECK(tables.live_entries() == 0);
}

TEST_CASE("maintainer flush") {
    RedirectTables tables(3);
    record_redirect(tables, moved(0, 1.0, 0, 1), std::vector<Request>{{0, 0, 1.0}});
    record_redirect(tables, moved(3, 2.0, 0, 2), std::vector<Request>{{3, 0, 2.0}});
    record_redirect(tables, moved(1, 4.0, 1, 2), std::vector<Request>{{1, 0, 4.0}});

    SUBCASE("busy windows move nothing") {
        const auto r = maintainer_flush(tables, false, 10);
        CHECK(r.migrated.empty());
        CHECK(tables.live_entries() == 3);
    }
    SUBCASE("round-robin over tables, oldest first, within budget") {
        const auto r = maintainer_flush(tables, true, 2);
        REQUIRE(r.migrated.size() == 2);
        CHECK(r.migrated[0].default_server == 0);
        CHECK(r.migrated[0].entry.object_id == 0);
        CHECK(r.migrated[1].default_server == 1);
        CHECK(r.migrated_mb == 5.0);
        CHECK(tables.live_entries() == 1);
        CHECK(resolve_read(tables, 3, 0, 3) == ReadLocation{2, true});
        CHECK(resolve_read(tables, 0, 0, 3) == ReadLocation{0, false});

        const auto rest = maintainer_flush(tables, true, 10);
        CHECK(rest.migrated.size() == 1);
        CHECK(tables.live_entries() == 0);
        CHECK(maintainer_flush(tables, true, 10).migrated.empty());
    }
    SUBCASE("zero budget") {
        CHECK(maintainer_flush(tables, true, 0).migrated.empty());
    }
}
