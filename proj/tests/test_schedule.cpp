#include <catch2/catch_amalgamated.hpp>

#include "pnav/presets.hpp"
#include "pnav/schedule.hpp"

using namespace pnav;

namespace {

ScanGraph two_room_scan() {
    std::vector<NodeRecord> nodes = {{"bed0", RoomLabel::Bedroom, {}, {}},
                                     {"bed1", RoomLabel::Bedroom, {}, {}},
                                     {"bath0", RoomLabel::Bathroom, {}, {}},
                                     {"bath1", RoomLabel::Bathroom, {}, {}}};
    std::vector<EdgeRecord> edges = {{"bed0", "bed1", 1.0}, {"bed1", "bath0", 1.5}, {"bath0", "bath1", 1.0}};
    return ScanGraph(std::move(nodes), std::move(edges));
}

PlacementSchedule mug_example_schedule() {
    PlacementSchedule s;
    s.horizon = 50;
    s.waiting_period = 6;
    s.object_timesteps["mug"] = {{1, 10}, {11, 32}, {33, 44}, {45, 50}};
    s.object_nodes["mug"] = {"NodeA", "NodeB", "NodeA", "NodeC"};
    s.validate();
    return s;
}

}  // namespace

TEST_CASE("default catalog reproduces the room-object table") {
    const PortableObjectCatalog& c = default_catalog();
    REQUIRE(c.objects.size() == 21);
    c.validate();
    CHECK(c.rooms_of("phone").size() == 9);
    CHECK(c.rooms_of("headphones").size() == 9);
    CHECK(c.rooms_of("hat").size() == 9);
    CHECK(c.rooms_of("dumbbells") == std::set<RoomLabel>{RoomLabel::Gym});
    for (const std::string& o : c.objects) {
        CHECK(c.rooms_of(o).size() >= 1);
        CHECK(c.rooms_of(o).size() <= 9);
    }
    // room frequencies the scripted oracle leans on
    CHECK(c.portables_mapped_to(RoomLabel::Bathroom) == 3);
    CHECK(c.portables_mapped_to(RoomLabel::Gym) == 6);
    CHECK(c.portables_mapped_to(RoomLabel::Bedroom) == 11);
    CHECK(c.portables_mapped_to(RoomLabel::Other) == 0);
}

TEST_CASE("catalog file round-trip") {
    const PortableObjectCatalog& c = default_catalog();
    auto j = c.to_json();
    PortableObjectCatalog back = PortableObjectCatalog::from_json(j);
    CHECK(back.objects == c.objects);
    CHECK(back.room_map == c.room_map);
}

TEST_CASE("random_partition with T == w has exactly one interval") {
    Rng rng(1);
    auto p = random_partition(10, 10, std::nullopt, rng);
    REQUIRE(p.size() == 1);
    CHECK(p[0] == Interval{1, 10});
}

TEST_CASE("random_partition respects coverage and minimum length", "[property]") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Rng rng(seed);
        auto p = random_partition(50, 5, 25, rng);
        int expected_start = 1;
        for (std::size_t i = 0; i < p.size(); ++i) {
            REQUIRE(p[i].start == expected_start);
            REQUIRE(p[i].length() >= 5);
            if (i + 1 < p.size()) REQUIRE(p[i].length() <= 25);
            expected_start = p[i].end + 1;
        }
        REQUIRE(p.back().end == 50);
    }
}

TEST_CASE("random_partition rejects T < w") {
    Rng rng(1);
    CHECK_THROWS_AS(random_partition(4, 5, std::nullopt, rng), std::invalid_argument);
}

TEST_CASE("the published mug partition is a valid schedule shape") {
    PlacementSchedule s = mug_example_schedule();
    SECTION("lookups match the worked example") {
        auto at_c_47 = s.objects_at("NodeC", 47);
        CHECK(std::find(at_c_47.begin(), at_c_47.end(), "mug") != at_c_47.end());
        CHECK(s.objects_at("NodeC", 5).empty());
        CHECK(s.object_location("mug", 47) == "NodeC");
        CHECK(s.object_location("mug", 1) == "NodeA");
        CHECK(s.object_location("mug", 50) == "NodeC");
        CHECK(s.object_location("mug", 32) == "NodeB");
        CHECK(s.object_location("mug", 33) == "NodeA");
    }
    SECTION("out-of-range timesteps are rejected") {
        CHECK_THROWS_AS(s.object_location("mug", 0), std::out_of_range);
        CHECK_THROWS_AS(s.object_location("mug", 51), std::out_of_range);
        CHECK_THROWS_AS(s.objects_at("NodeA", -3), std::out_of_range);
        CHECK_THROWS_AS(s.object_location("wallet", 5), std::invalid_argument);
    }
}

TEST_CASE("fully-routine schedules are identical for every episode") {
    const ScanGraph& scan = presets::desk_scan();
    ScheduleConfig cfg = presets::desk_schedule_config(5);
    auto a = build_schedule(scan, default_catalog(), cfg, Scheme::FullyRoutine, 0);
    auto b = build_schedule(scan, default_catalog(), cfg, Scheme::FullyRoutine, 17);
    CHECK(a.to_json().dump() == b.to_json().dump());
}

TEST_CASE("semi-routine respects the room mapping") {
    ScanGraph scan = two_room_scan();
    ScheduleConfig cfg;
    cfg.horizon = 50;
    cfg.waiting_period = 5;
    cfg.max_interval_len = 25;
    cfg.base_seed = 3;
    for (int episode = 0; episode < 10; ++episode) {
        auto s = build_schedule(scan, default_catalog().subset({"toothbrush"}), cfg, Scheme::SemiRoutine, episode);
        for (const std::string& node : s.object_nodes.at("toothbrush")) {
            RoomLabel room = scan.node(scan.index_of(node)).room;
            CHECK((room == RoomLabel::Bedroom || room == RoomLabel::Bathroom));
        }
    }
}

TEST_CASE("random schedules differ between episodes") {
    const ScanGraph& scan = presets::desk_scan();
    int differing = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        ScheduleConfig cfg = presets::desk_schedule_config(seed);
        auto a = build_schedule(scan, default_catalog(), cfg, Scheme::Random, 0);
        auto b = build_schedule(scan, default_catalog(), cfg, Scheme::Random, 1);
        if (a.to_json().dump() != b.to_json().dump()) ++differing;
    }
    CHECK(differing > 90);
}

TEST_CASE("build_schedule is deterministic") {
    const ScanGraph& scan = presets::desk_scan();
    ScheduleConfig cfg = presets::desk_schedule_config(11);
    auto a = build_schedule(scan, default_catalog(), cfg, Scheme::SemiRoutine, 4);
    auto b = build_schedule(scan, default_catalog(), cfg, Scheme::SemiRoutine, 4);
    CHECK(a.to_json().dump() == b.to_json().dump());
}

TEST_CASE("every object is somewhere at every timestep") {
    const ScanGraph& scan = presets::desk_scan();
    ScheduleConfig cfg = presets::desk_schedule_config(2);
    auto s = build_schedule(scan, default_catalog(), cfg, Scheme::Random, 3);
    for (int t = 1; t <= s.horizon; t += 7) {
        std::size_t total = 0;
        for (std::size_t i = 0; i < scan.size(); ++i) total += s.objects_at(scan.node(i).id, t).size();
        CHECK(total == 21);
    }
}

TEST_CASE("objects_at and object_location agree", "[property]") {
    const ScanGraph& scan = presets::desk_scan();
    ScheduleConfig cfg = presets::desk_schedule_config(9);
    auto s = build_schedule(scan, default_catalog(), cfg, Scheme::SemiRoutine, 1);
    for (int t = 1; t <= s.horizon; t += 3) {
        for (const std::string& obj : s.object_names()) {
            const std::string& where = s.object_location(obj, t);
            auto at = s.objects_at(where, t);
            CHECK(std::find(at.begin(), at.end(), obj) != at.end());
        }
        for (std::size_t i = 0; i < scan.size(); ++i) {
            for (const std::string& obj : s.objects_at(scan.node(i).id, t)) {
                CHECK(s.object_location(obj, t) == scan.node(i).id);
            }
        }
    }
}

TEST_CASE("objects with no mapped room in the scan fall back to the whole node set") {
    ScanGraph scan = two_room_scan();  // Bedroom + Bathroom only
    ScheduleConfig cfg;
    cfg.horizon = 30;
    cfg.waiting_period = 5;
    cfg.max_interval_len = 25;
    auto s = build_schedule(scan, default_catalog().subset({"dumbbells"}), cfg, Scheme::SemiRoutine, 0);
    REQUIRE(s.fallback_objects == std::vector<std::string>{"dumbbells"});
    CHECK(s.object_nodes.at("dumbbells").size() == s.object_timesteps.at("dumbbells").size());
}

TEST_CASE("schedule file format carries the two dictionaries") {
    const ScanGraph& scan = presets::desk_scan();
    ScheduleConfig cfg = presets::desk_schedule_config(4);
    auto s = build_schedule(scan, presets::desk_catalog(), cfg, Scheme::SemiRoutine, 2);
    auto j = s.to_json();
    REQUIRE(j.contains("object_timesteps"));
    REQUIRE(j.contains("object_nodes"));
    REQUIRE(j.contains("meta"));
    CHECK(j["meta"]["scheme"] == "semi-routine");
    CHECK(j["meta"]["T"] == 30);
    CHECK(j["meta"]["w"] == 5);

    PlacementSchedule back = PlacementSchedule::from_json(j);
    CHECK(back.to_json().dump() == j.dump());
}

TEST_CASE("schedule config validation") {
    ScheduleConfig cfg;
    cfg.horizon = 4;
    cfg.waiting_period = 5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.horizon = 50;
    cfg.max_interval_len = 3;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.max_interval_len = 25;
    CHECK_NOTHROW(cfg.validate());
}
