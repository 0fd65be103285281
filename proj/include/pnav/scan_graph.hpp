#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pnav/rng.hpp"
#include "pnav/rooms.hpp"

namespace pnav {

struct NodeRecord {
    std::string id;
    RoomLabel room = RoomLabel::Other;
    std::optional<std::array<double, 3>> position;
    std::vector<std::string> scene_objects;  // derived, not serialized
};

struct EdgeRecord {
    std::string a;
    std::string b;
    double distance = 0.0;
};

// Undirected topological house graph. Immutable after construction; safe to
// share read-only across concurrent episode engines.
class ScanGraph {
public:
    ScanGraph(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges)
        : nodes_(std::move(nodes)), edges_(std::move(edges)) {
        build_and_validate();
    }

    std::size_t size() const { return nodes_.size(); }
    const std::vector<NodeRecord>& nodes() const { return nodes_; }
    const std::vector<EdgeRecord>& edges() const { return edges_; }

    const NodeRecord& node(std::size_t index) const { return nodes_.at(index); }

    std::size_t index_of(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw std::invalid_argument("unknown node id: " + id);
        return it->second;
    }

    bool has_node(const std::string& id) const { return index_.count(id) != 0; }

    // Neighbor indices, sorted ascending. Never contains the node itself.
    const std::vector<std::size_t>& neighbor_indices(std::size_t index) const { return adjacency_.at(index); }

    std::set<std::string> neighbors(const std::string& id) const {
        std::set<std::string> out;
        for (std::size_t j : adjacency_.at(index_of(id))) out.insert(nodes_[j].id);
        return out;
    }

    bool adjacent(std::size_t a, std::size_t b) const {
        const auto& adj = adjacency_.at(a);
        return std::binary_search(adj.begin(), adj.end(), b);
    }

    double edge_distance(std::size_t a, std::size_t b) const {
        auto it = distances_.find(edge_key(a, b));
        if (it == distances_.end()) throw std::invalid_argument("no such edge");
        return it->second;
    }

    std::set<std::string> nodes_in_room(RoomLabel room) const {
        std::set<std::string> out;
        for (const NodeRecord& n : nodes_) {
            if (n.room == room) out.insert(n.id);
        }
        return out;
    }

    std::vector<std::size_t> node_indices_in_room(RoomLabel room) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (nodes_[i].room == room) out.push_back(i);
        }
        return out;
    }

    std::set<RoomLabel> rooms_present() const {
        std::set<RoomLabel> out;
        for (const NodeRecord& n : nodes_) out.insert(n.room);
        return out;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["nodes"] = nlohmann::ordered_json::array();
        for (const NodeRecord& n : nodes_) {
            nlohmann::ordered_json jn;
            jn["id"] = n.id;
            jn["room"] = std::string(room_name(n.room));
            if (n.position) jn["pos"] = {(*n.position)[0], (*n.position)[1], (*n.position)[2]};
            j["nodes"].push_back(std::move(jn));
        }
        j["edges"] = nlohmann::ordered_json::array();
        for (const EdgeRecord& e : edges_) {
            j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"dist", e.distance}});
        }
        return j;
    }

private:
    static std::pair<std::size_t, std::size_t> edge_key(std::size_t a, std::size_t b) {
        return {std::min(a, b), std::max(a, b)};
    }

    void build_and_validate() {
        if (nodes_.empty()) throw std::invalid_argument("scan validation error: empty node set");
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            auto [it, inserted] = index_.emplace(nodes_[i].id, i);
            if (!inserted) throw std::invalid_argument("scan validation error: duplicate node id '" + nodes_[i].id + "'");
        }
        adjacency_.assign(nodes_.size(), {});
        for (const EdgeRecord& e : edges_) {
            auto ai = index_.find(e.a);
            auto bi = index_.find(e.b);
            if (ai == index_.end() || bi == index_.end()) {
                throw std::invalid_argument("scan validation error: dangling edge " + e.a + " -- " + e.b);
            }
            if (ai->second == bi->second) {
                throw std::invalid_argument("scan validation error: self-loop at '" + e.a + "'");
            }
            if (!(e.distance > 0.0)) {
                throw std::invalid_argument("scan validation error: non-positive distance on edge " + e.a + " -- " + e.b);
            }
            auto [it, inserted] = distances_.emplace(edge_key(ai->second, bi->second), e.distance);
            if (!inserted) {
                throw std::invalid_argument("scan validation error: duplicate edge " + e.a + " -- " + e.b);
            }
            adjacency_[ai->second].push_back(bi->second);
            adjacency_[bi->second].push_back(ai->second);
        }
        for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());

        // connectivity
        std::vector<char> seen(nodes_.size(), 0);
        std::vector<std::size_t> stack = {0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w : adjacency_[v]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    stack.push_back(w);
                }
            }
        }
        if (reached != nodes_.size()) {
            throw std::invalid_argument("scan validation error: disconnected graph");
        }

        for (NodeRecord& n : nodes_) {
            if (n.scene_objects.empty()) n.scene_objects = derive_scene_objects(n.id, n.room);
        }
    }

    std::vector<NodeRecord> nodes_;
    std::vector<EdgeRecord> edges_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::map<std::pair<std::size_t, std::size_t>, double> distances_;
};

inline ScanGraph scan_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("nodes") || !j.contains("edges")) {
        throw std::invalid_argument("scan parse error: expected object with 'nodes' and 'edges'");
    }
    std::vector<NodeRecord> nodes;
    for (const auto& jn : j.at("nodes")) {
        NodeRecord n;
        n.id = jn.at("id").get<std::string>();
        std::string room = jn.at("room").get<std::string>();
        auto parsed = parse_room(room);
        if (!parsed) throw std::invalid_argument("scan parse error: unknown room '" + room + "'");
        n.room = *parsed;
        if (jn.contains("pos")) {
            const auto& p = jn.at("pos");
            if (!p.is_array() || p.size() != 3) throw std::invalid_argument("scan parse error: pos must be [x,y,z]");
            n.position = std::array<double, 3>{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
        }
        nodes.push_back(std::move(n));
    }
    std::vector<EdgeRecord> edges;
    for (const auto& je : j.at("edges")) {
        edges.push_back({je.at("a").get<std::string>(), je.at("b").get<std::string>(), je.at("dist").get<double>()});
    }
    return ScanGraph(std::move(nodes), std::move(edges));
}

inline ScanGraph load_scan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scan file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("scan parse error: " + std::string(e.what()));
    }
    return scan_from_json(j);
}

inline void save_scan(const ScanGraph& scan, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scan file: " + path);
    out << scan.to_json().dump(2) << "\n";
}

// Synthetic house generator: contiguous room clusters of 2-6 nodes joined by a
// spanning tree plus floor(density * n) extra edges. Pure function of its
// arguments.
inline ScanGraph generate_synthetic_scan(std::uint64_t seed, int n_nodes,
                                         const std::map<RoomLabel, double>& room_mix,
                                         double density = 0.3) {
    if (n_nodes < 2) throw std::invalid_argument("generate_synthetic_scan: n_nodes must be >= 2");
    double total_weight = 0.0;
    for (const auto& [room, w] : room_mix) {
        if (w < 0.0) throw std::invalid_argument("generate_synthetic_scan: negative room weight");
        total_weight += w;
    }
    if (total_weight <= 0.0) throw std::invalid_argument("generate_synthetic_scan: no positive room weight");
    if (density < 0.0) throw std::invalid_argument("generate_synthetic_scan: negative density");

    Rng rng(seed_combine({fnv1a64("scan-gen"), seed, static_cast<std::uint64_t>(n_nodes)}));

    // Cluster sizes in [2,6] summing to n; never leave a remainder of 1.
    std::vector<int> cluster_sizes;
    int remaining = n_nodes;
    while (remaining > 0) {
        if (remaining <= 6) {
            cluster_sizes.push_back(remaining);
            break;
        }
        int size = rng.uniform_int(2, 6);
        if (remaining - size == 1) size = (size > 2) ? size - 1 : size + 1;
        cluster_sizes.push_back(size);
        remaining -= size;
    }

    auto pick_room = [&]() {
        double x = rng.uniform_real() * total_weight;
        for (RoomLabel r : all_rooms()) {
            auto it = room_mix.find(r);
            if (it == room_mix.end()) continue;
            x -= it->second;
            if (x < 0.0) return r;
        }
        return room_mix.rbegin()->first;
    };

    int id_width = n_nodes > 999 ? 4 : 3;
    std::vector<NodeRecord> nodes;
    std::vector<std::size_t> cluster_of;
    std::vector<std::vector<std::size_t>> cluster_members;
    for (std::size_t c = 0; c < cluster_sizes.size(); ++c) {
        RoomLabel room = pick_room();
        double cx = static_cast<double>(c % 4) * 9.0;
        double cy = static_cast<double>(c / 4) * 9.0;
        cluster_members.push_back({});
        for (int k = 0; k < cluster_sizes[c]; ++k) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "n%0*zu", id_width, nodes.size());
            NodeRecord n;
            n.id = buf;
            n.room = room;
            double jx = std::floor(rng.uniform_real() * 600.0) / 100.0;
            double jy = std::floor(rng.uniform_real() * 600.0) / 100.0;
            n.position = std::array<double, 3>{cx + jx, cy + jy, 0.0};
            cluster_of.push_back(c);
            cluster_members[c].push_back(nodes.size());
            nodes.push_back(std::move(n));
        }
    }

    auto euclid = [&](std::size_t a, std::size_t b) {
        const auto& pa = *nodes[a].position;
        const auto& pb = *nodes[b].position;
        double d = std::sqrt((pa[0] - pb[0]) * (pa[0] - pb[0]) + (pa[1] - pb[1]) * (pa[1] - pb[1]));
        d = std::max(d, 0.25);
        return std::floor(d * 1000.0) / 1000.0;
    };

    std::set<std::pair<std::size_t, std::size_t>> edge_set;
    std::vector<EdgeRecord> edges;
    auto add_edge = [&](std::size_t a, std::size_t b) {
        if (a == b) return false;
        auto key = std::make_pair(std::min(a, b), std::max(a, b));
        if (!edge_set.insert(key).second) return false;
        edges.push_back({nodes[a].id, nodes[b].id, euclid(a, b)});
        return true;
    };

    // chain within each cluster (keeps rooms contiguous)
    for (const auto& members : cluster_members) {
        for (std::size_t k = 1; k < members.size(); ++k) add_edge(members[k - 1], members[k]);
    }
    // spanning tree over clusters
    for (std::size_t c = 1; c < cluster_members.size(); ++c) {
        std::size_t target_cluster = rng.uniform_index(c);
        std::size_t a = cluster_members[c][rng.uniform_index(cluster_members[c].size())];
        std::size_t b = cluster_members[target_cluster][rng.uniform_index(cluster_members[target_cluster].size())];
        add_edge(a, b);
    }
    // extra edges at the requested density
    int extra = static_cast<int>(density * n_nodes);
    int attempts = 0;
    while (extra > 0 && attempts < 10000) {
        ++attempts;
        std::size_t a = rng.uniform_index(nodes.size());
        std::size_t b = rng.uniform_index(nodes.size());
        if (add_edge(a, b)) --extra;
    }

    return ScanGraph(std::move(nodes), std::move(edges));
}

inline std::map<RoomLabel, double> uniform_room_mix() {
    std::map<RoomLabel, double> mix;
    for (RoomLabel r : all_rooms()) {
        if (r != RoomLabel::Other) mix[r] = 1.0;
    }
    return mix;
}

}  // namespace pnav
