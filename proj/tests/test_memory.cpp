#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include "pnav/memory.hpp"
#include "pnav/rng.hpp"

using namespace pnav;

TEST_CASE("memory buffer evicts oldest entries beyond the horizon") {
    MemoryBuffer buffer(5);
    for (int i = 0; i < 8; ++i) {
        buffer.push({{"obj" + std::to_string(i)}, "choice" + std::to_string(i)});
    }
    REQUIRE(buffer.size() == 5);
    CHECK(buffer.entries().front().choice == "choice3");  // 0..2 evicted
    CHECK(buffer.entries().back().choice == "choice7");
    CHECK(buffer.choices() == std::vector<std::string>{"choice3", "choice4", "choice5", "choice6", "choice7"});
}

TEST_CASE("tree records grow one node per sighting") {
    MemoryTree tree;
    CHECK(tree.size() == 0);
    std::size_t a = tree.record(MemoryTree::kRoot, 0, "sofa", "A", false);
    std::size_t b = tree.record(a, 1, "mug", "B", true);
    CHECK(tree.size() == 2);
    CHECK(tree.node(b).parent == a);
    CHECK(tree.node(a).children == std::vector<std::size_t>{b});
    CHECK(tree.nodes_for_object("mug") == std::vector<std::size_t>{b});
}

TEST_CASE("anchor reuses the latest sighting at a graph node") {
    MemoryTree tree;
    std::size_t a = tree.record(MemoryTree::kRoot, 0, "sofa", "A", false);
    tree.record(a, 1, "mug", "B", true);
    std::size_t pos = tree.anchor("A", 5);
    CHECK(pos == a);  // reused, no new node
    CHECK(tree.size() == 2);

    std::size_t fresh = tree.anchor("Z", 6);
    CHECK(tree.size() == 3);
    CHECK(tree.node(fresh).graph_node == "Z");
    CHECK(tree.node(fresh).parent == MemoryTree::kRoot);
}

TEST_CASE("no portable sightings means no plan") {
    MemoryTree tree;
    std::size_t a = tree.record(MemoryTree::kRoot, 0, "sofa", "A", false);
    tree.record(a, 1, "lamp", "B", false);
    tree.set_position(a);
    CHECK_FALSE(tree.find_nearest_portable_path(a).has_value());
}

TEST_CASE("BFS returns the shallower portable") {
    MemoryTree tree;
    std::size_t a = tree.record(MemoryTree::kRoot, 0, "sofa", "A", false);
    std::size_t b = tree.record(a, 1, "desk", "B", false);
    std::size_t c = tree.record(b, 2, "rug", "C", false);
    tree.record(c, 3, "phone", "D", true);   // depth 3 from a
    tree.record(a, 1, "mug", "E", true);     // depth 1 from a
    auto plan = tree.find_nearest_portable_path(a);
    REQUIRE(plan.has_value());
    CHECK(plan->cost == 1);
    CHECK(plan->object_chain == std::vector<std::string>{"mug"});
    CHECK(plan->node_chain == std::vector<std::string>{"E"});
}

TEST_CASE("plans can climb toward an ancestor's other branch") {
    MemoryTree tree;
    std::size_t a = tree.record(MemoryTree::kRoot, 0, "sofa", "A", false);
    std::size_t b = tree.record(a, 1, "desk", "B", false);
    std::size_t mug = tree.record(a, 1, "mug", "C", true);
    auto plan = tree.find_nearest_portable_path(b);
    REQUIRE(plan.has_value());
    CHECK(plan->cost == 2);  // b -> a -> mug
    CHECK(plan->node_chain == std::vector<std::string>{"A", "C"});
    CHECK(plan->terminal_tree_node == mug);
}

TEST_CASE("equal-cost plans break ties by terminal object name") {
    MemoryTree tree;
    std::size_t a = tree.record(MemoryTree::kRoot, 0, "sofa", "A", false);
    tree.record(a, 1, "phone", "B", true);
    tree.record(a, 1, "mug", "C", true);
    auto plan = tree.find_nearest_portable_path(a);
    REQUIRE(plan.has_value());
    CHECK(plan->cost == 1);
    CHECK(plan->object_chain.back() == "mug");
}

TEST_CASE("excluded terminals are skipped") {
    MemoryTree tree;
    std::size_t a = tree.record(MemoryTree::kRoot, 0, "sofa", "A", false);
    std::size_t near = tree.record(a, 1, "mug", "B", true);
    std::size_t far_mid = tree.record(a, 1, "desk", "C", false);
    std::size_t far = tree.record(far_mid, 2, "phone", "D", true);
    auto plan = tree.find_nearest_portable_path(a, {near});
    REQUIRE(plan.has_value());
    CHECK(plan->terminal_tree_node == far);
    CHECK(plan->cost == 2);

    CHECK_FALSE(tree.find_nearest_portable_path(a, {near, far}).has_value());
}

TEST_CASE("BFS cost matches exhaustive tree-path search", "[property]") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed_combine({fnv1a64("tree-gen"), seed}));
        MemoryTree tree;
        std::size_t count = 1 + rng.uniform_index(50);
        std::vector<std::size_t> ids;
        ids.push_back(tree.record(MemoryTree::kRoot, 0, "anchor", "g0", false));
        for (std::size_t i = 1; i < count; ++i) {
            std::size_t parent = ids[rng.uniform_index(ids.size())];
            bool portable = rng.uniform_real() < 0.15;
            ids.push_back(tree.record(parent, static_cast<int>(i), "obj" + std::to_string(rng.uniform_index(8)),
                                      "g" + std::to_string(rng.uniform_index(12)), portable));
        }
        std::size_t from = ids[rng.uniform_index(ids.size())];

        // independent oracle: depth of every node from `from` by full traversal
        std::map<std::size_t, int> depth;
        std::function<void(std::size_t, std::size_t, int)> walk = [&](std::size_t v, std::size_t prev, int d) {
            depth[v] = d;
            const auto& n = tree.node(v);
            if (n.parent != MemoryTree::kRoot && n.parent != prev) walk(n.parent, v, d + 1);
            for (std::size_t c : n.children) {
                if (c != prev) walk(c, v, d + 1);
            }
        };
        walk(from, from, 0);

        std::optional<std::tuple<int, std::string, std::string, std::size_t>> best;
        for (std::size_t id : ids) {
            if (id == from || !tree.node(id).portable || !depth.count(id)) continue;
            auto key = std::make_tuple(depth.at(id), tree.node(id).object, tree.node(id).graph_node, id);
            if (!best || key < *best) best = key;
        }

        auto plan = tree.find_nearest_portable_path(from);
        if (!best) {
            REQUIRE_FALSE(plan.has_value());
        } else {
            REQUIRE(plan.has_value());
            REQUIRE(plan->cost == std::get<0>(*best));
            REQUIRE(plan->terminal_tree_node == std::get<3>(*best));
        }
    }
}
