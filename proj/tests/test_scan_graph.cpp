#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "pnav/scan_graph.hpp"

using namespace pnav;

namespace {

ScanGraph triangle() {
    std::vector<NodeRecord> nodes = {{"A", RoomLabel::Bedroom, {}, {}},
                                     {"B", RoomLabel::Bedroom, {}, {}},
                                     {"C", RoomLabel::Bedroom, {}, {}}};
    std::vector<EdgeRecord> edges = {{"A", "B", 1.0}, {"B", "C", 1.0}, {"A", "C", 1.0}};
    return ScanGraph(std::move(nodes), std::move(edges));
}

std::filesystem::path temp_file(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "pnav_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("triangle scan loads with full adjacency") {
    auto path = temp_file("triangle.json");
    {
        std::ofstream out(path);
        out << R"({"nodes":[{"id":"A","room":"Bedroom"},{"id":"B","room":"Bedroom"},{"id":"C","room":"Bedroom"}],
                   "edges":[{"a":"A","b":"B","dist":1.0},{"a":"B","b":"C","dist":1.0},{"a":"A","b":"C","dist":1.0}]})";
    }
    ScanGraph scan = load_scan(path.string());
    REQUIRE(scan.size() == 3);
    CHECK(scan.neighbors("A") == std::set<std::string>{"B", "C"});
}

TEST_CASE("dangling edge is a validation error") {
    std::vector<NodeRecord> nodes = {{"A", RoomLabel::Bedroom, {}, {}}, {"B", RoomLabel::Bedroom, {}, {}}};
    std::vector<EdgeRecord> edges = {{"A", "Z", 1.0}};
    REQUIRE_THROWS_WITH(ScanGraph(std::move(nodes), std::move(edges)),
                        Catch::Matchers::ContainsSubstring("dangling edge"));
}

TEST_CASE("scan validation names the violated invariant") {
    SECTION("duplicate id") {
        std::vector<NodeRecord> nodes = {{"A", RoomLabel::Bedroom, {}, {}}, {"A", RoomLabel::Garage, {}, {}}};
        REQUIRE_THROWS_WITH(ScanGraph(std::move(nodes), {}), Catch::Matchers::ContainsSubstring("duplicate node id"));
    }
    SECTION("non-positive distance") {
        std::vector<NodeRecord> nodes = {{"A", RoomLabel::Bedroom, {}, {}}, {"B", RoomLabel::Bedroom, {}, {}}};
        std::vector<EdgeRecord> edges = {{"A", "B", 0.0}};
        REQUIRE_THROWS_WITH(ScanGraph(std::move(nodes), std::move(edges)),
                            Catch::Matchers::ContainsSubstring("non-positive distance"));
    }
    SECTION("disconnected") {
        std::vector<NodeRecord> nodes = {{"A", RoomLabel::Bedroom, {}, {}},
                                         {"B", RoomLabel::Bedroom, {}, {}},
                                         {"C", RoomLabel::Bedroom, {}, {}}};
        std::vector<EdgeRecord> edges = {{"A", "B", 1.0}};
        REQUIRE_THROWS_WITH(ScanGraph(std::move(nodes), std::move(edges)),
                            Catch::Matchers::ContainsSubstring("disconnected"));
    }
    SECTION("self loop") {
        std::vector<NodeRecord> nodes = {{"A", RoomLabel::Bedroom, {}, {}}, {"B", RoomLabel::Bedroom, {}, {}}};
        std::vector<EdgeRecord> edges = {{"A", "A", 1.0}, {"A", "B", 1.0}};
        REQUIRE_THROWS_WITH(ScanGraph(std::move(nodes), std::move(edges)),
                            Catch::Matchers::ContainsSubstring("self-loop"));
    }
    SECTION("unknown room string") {
        nlohmann::json j = {{"nodes", {{{"id", "A"}, {"room", "Ballroom"}}}}, {"edges", nlohmann::json::array()}};
        REQUIRE_THROWS_WITH(scan_from_json(j), Catch::Matchers::ContainsSubstring("unknown room"));
    }
}

TEST_CASE("53-node synthetic scan round-trips through the file format") {
    ScanGraph scan = generate_synthetic_scan(7, 53, uniform_room_mix());
    auto path = temp_file("scan53.json");
    save_scan(scan, path.string());
    ScanGraph loaded = load_scan(path.string());
    REQUIRE(loaded.size() == 53);
    CHECK(loaded.to_json().dump() == scan.to_json().dump());
    // scene objects are derived, so they survive serialization
    CHECK(loaded.node(0).scene_objects == scan.node(0).scene_objects);
}

TEST_CASE("neighbors examples") {
    SECTION("triangle") {
        ScanGraph scan = triangle();
        CHECK(scan.neighbors("A") == std::set<std::string>{"B", "C"});
    }
    SECTION("path graph midpoint") {
        std::vector<NodeRecord> nodes = {{"A", RoomLabel::Bedroom, {}, {}},
                                         {"B", RoomLabel::Bedroom, {}, {}},
                                         {"C", RoomLabel::Bedroom, {}, {}}};
        std::vector<EdgeRecord> edges = {{"A", "B", 1.0}, {"B", "C", 1.0}};
        ScanGraph scan(std::move(nodes), std::move(edges));
        CHECK(scan.neighbors("B") == std::set<std::string>{"A", "C"});
    }
    SECTION("star leaf") {
        std::vector<NodeRecord> nodes = {{"hub", RoomLabel::Lounge, {}, {}}};
        std::vector<EdgeRecord> edges;
        for (int i = 0; i < 5; ++i) {
            nodes.push_back({"leaf" + std::to_string(i), RoomLabel::Bedroom, {}, {}});
            edges.push_back({"hub", "leaf" + std::to_string(i), 1.0});
        }
        ScanGraph scan(std::move(nodes), std::move(edges));
        CHECK(scan.neighbors("leaf3") == std::set<std::string>{"hub"});
    }
    SECTION("unknown node id") {
        ScanGraph scan = triangle();
        REQUIRE_THROWS_AS(scan.neighbors("Z"), std::invalid_argument);
    }
}

TEST_CASE("synthetic generation is a pure function of its arguments") {
    auto a = generate_synthetic_scan(1, 20, uniform_room_mix());
    auto b = generate_synthetic_scan(1, 20, uniform_room_mix());
    CHECK(a.to_json().dump() == b.to_json().dump());

    auto c = generate_synthetic_scan(2, 20, uniform_room_mix());
    CHECK(a.to_json().dump() != c.to_json().dump());
}

TEST_CASE("synthetic scan covers most requested rooms at 53 nodes") {
    auto scan = generate_synthetic_scan(7, 53, uniform_room_mix());
    CHECK(scan.rooms_present().size() >= 8);
}

TEST_CASE("rooms partition the node set") {
    auto scan = generate_synthetic_scan(7, 53, uniform_room_mix());
    std::size_t total = 0;
    for (RoomLabel r : all_rooms()) total += scan.nodes_in_room(r).size();
    CHECK(total == scan.size());

    SECTION("absent room gives the empty set") {
        ScanGraph tri = triangle();
        CHECK(tri.nodes_in_room(RoomLabel::Garage).empty());
        CHECK(tri.nodes_in_room(RoomLabel::Bedroom) == std::set<std::string>{"A", "B", "C"});
    }
}

TEST_CASE("generated scans satisfy the structural invariants", "[property]") {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        int n = 2 + static_cast<int>(seed % 40);
        ScanGraph scan = generate_synthetic_scan(seed, n, uniform_room_mix());
        REQUIRE(scan.size() == static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < scan.size(); ++i) {
            for (std::size_t j : scan.neighbor_indices(i)) {
                REQUIRE(j != i);
                const auto& back = scan.neighbor_indices(j);
                REQUIRE(std::binary_search(back.begin(), back.end(), i));
            }
        }
        // room clusters stay within the documented size band
        for (RoomLabel r : all_rooms()) {
            auto members = scan.nodes_in_room(r);
            if (!members.empty() && n > 6) {
                // a room may host several clusters; just require nothing degenerate
                REQUIRE(members.size() >= 2);
            }
        }
    }
}

TEST_CASE("scene objects are room furniture, 3 to 8 per node") {
    auto scan = generate_synthetic_scan(3, 20, uniform_room_mix());
    for (std::size_t i = 0; i < scan.size(); ++i) {
        const NodeRecord& n = scan.node(i);
        REQUIRE(n.scene_objects.size() >= 3);
        REQUIRE(n.scene_objects.size() <= 8);
        for (const std::string& s : n.scene_objects) {
            auto room = furniture_room(s);
            REQUIRE(room.has_value());
            CHECK(*room == n.room);
        }
    }
}

TEST_CASE("generator argument validation") {
    CHECK_THROWS_AS(generate_synthetic_scan(1, 1, uniform_room_mix()), std::invalid_argument);
    CHECK_THROWS_AS(generate_synthetic_scan(1, 10, {}), std::invalid_argument);
    std::map<RoomLabel, double> negative = {{RoomLabel::Bedroom, -1.0}};
    CHECK_THROWS_AS(generate_synthetic_scan(1, 10, negative), std::invalid_argument);
}
