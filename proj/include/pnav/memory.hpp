#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pnav {

// FIFO history of (objects in view, chosen object) pairs for the complete
// memory variant. Capacity stands in for the token limit of the original
// model; the earliest entry is dropped on overflow.
class MemoryBuffer {
public:
    struct Entry {
        std::vector<std::string> objects;
        std::string choice;
    };

    explicit MemoryBuffer(std::size_t horizon = 50) : horizon_(horizon) {}

    void push(Entry entry) {
        entries_.push_back(std::move(entry));
        while (entries_.size() > horizon_) entries_.pop_front();
    }

    std::size_t size() const { return entries_.size(); }
    std::size_t horizon() const { return horizon_; }
    const std::deque<Entry>& entries() const { return entries_; }

    std::vector<std::string> choices() const {
        std::vector<std::string> out;
        out.reserve(entries_.size());
        for (const Entry& e : entries_) out.push_back(e.choice);
        return out;
    }

    void clear() { entries_.clear(); }

private:
    std::size_t horizon_;
    std::deque<Entry> entries_;
};

// Plan recovered from the memory tree: hop along node_chain (K = chain length
// hops) to reach the node where object_chain.back() was once seen.
struct TracebackPlan {
    std::vector<std::string> object_chain;
    std::vector<std::string> node_chain;
    int cost = 0;  // K
    std::size_t terminal_tree_node = 0;
};

// Timestep-indexed tree of sightings. A tree node records one object seen at
// one graph node; its children are the objects observed after the agent chose
// it. Consecutive tree nodes therefore sit on graph-adjacent nodes, which is
// what makes a traceback chain executable hop by hop.
class MemoryTree {
public:
    struct Node {
        int timestep = 0;
        std::string object;
        std::string graph_node;
        bool portable = false;
        std::size_t parent = 0;
        std::vector<std::size_t> children;
    };

    static constexpr std::size_t kRoot = 0;

    MemoryTree() { nodes_.push_back(Node{});  /* sentinel root */ }

    std::size_t size() const { return nodes_.size() - 1; }  // excluding sentinel
    const Node& node(std::size_t id) const { return nodes_.at(id); }
    std::size_t position() const { return position_; }

    // Record one sighting under `parent`; returns the new tree node id.
    std::size_t record(std::size_t parent, int timestep, const std::string& object,
                       const std::string& graph_node, bool portable) {
        Node n;
        n.timestep = timestep;
        n.object = object;
        n.graph_node = graph_node;
        n.portable = portable;
        n.parent = parent;
        std::size_t id = nodes_.size();
        nodes_.push_back(std::move(n));
        nodes_[parent].children.push_back(id);
        object_index_[object].push_back(id);
        graph_index_[graph_node].push_back(id);
        return id;
    }

    void set_position(std::size_t id) { position_ = id; }

    // Most recent tree node recorded at a graph node, if any. Used to re-sync
    // the tree position when the agent arrives somewhere it has seen before
    // (including at episode resets with a fresh start node).
    std::optional<std::size_t> latest_at(const std::string& graph_node) const {
        auto it = graph_index_.find(graph_node);
        if (it == graph_index_.end() || it->second.empty()) return std::nullopt;
        return it->second.back();
    }

    // Re-anchor at an episode start: reuse the latest sighting at that graph
    // node, otherwise open a fresh branch under the sentinel.
    std::size_t anchor(const std::string& graph_node, int timestep) {
        if (auto existing = latest_at(graph_node)) {
            position_ = *existing;
        } else {
            position_ = record(kRoot, timestep, "", graph_node, false);
        }
        return position_;
    }

    const std::vector<std::size_t>& nodes_for_object(const std::string& object) const {
        static const std::vector<std::size_t> empty;
        auto it = object_index_.find(object);
        return it == object_index_.end() ? empty : it->second;
    }

    // BFS outward from `from` over tree edges (never through the sentinel):
    // nearest recorded portable wins; among plans of equal cost the one whose
    // terminal object name sorts first. `excluded` tree nodes are skipped as
    // terminals (already chased or already collected this episode).
    std::optional<TracebackPlan> find_nearest_portable_path(std::size_t from,
                                                            const std::set<std::size_t>& excluded = {}) const {
        if (from == kRoot || from >= nodes_.size()) return std::nullopt;
        std::vector<std::size_t> parent_of(nodes_.size(), kRoot);
        std::vector<char> seen(nodes_.size(), 0);
        std::vector<std::size_t> frontier = {from};
        seen[from] = 1;
        int depth = 0;
        while (!frontier.empty()) {
            ++depth;
            std::vector<std::size_t> next;
            std::vector<std::size_t> hits;
            for (std::size_t v : frontier) {
                auto visit = [&](std::size_t w) {
                    if (w == kRoot || seen[w]) return;
                    seen[w] = 1;
                    parent_of[w] = v;
                    next.push_back(w);
                    if (nodes_[w].portable && !excluded.count(w)) hits.push_back(w);
                };
                visit(nodes_[v].parent);
                for (std::size_t c : nodes_[v].children) visit(c);
            }
            if (!hits.empty()) {
                std::size_t best = hits.front();
                for (std::size_t h : hits) {
                    const Node& a = nodes_[h];
                    const Node& b = nodes_[best];
                    if (std::tie(a.object, a.graph_node, h) < std::tie(b.object, b.graph_node, best)) best = h;
                }
                TracebackPlan plan;
                plan.terminal_tree_node = best;
                for (std::size_t v = best; v != from; v = parent_of[v]) {
                    plan.object_chain.push_back(nodes_[v].object);
                    plan.node_chain.push_back(nodes_[v].graph_node);
                }
                std::reverse(plan.object_chain.begin(), plan.object_chain.end());
                std::reverse(plan.node_chain.begin(), plan.node_chain.end());
                plan.cost = static_cast<int>(plan.node_chain.size());
                return plan;
            }
            frontier = std::move(next);
        }
        return std::nullopt;
    }

private:
    std::vector<Node> nodes_;
    std::size_t position_ = kRoot;
    std::map<std::string, std::vector<std::size_t>> object_index_;
    std::map<std::string, std::vector<std::size_t>> graph_index_;
};

}  // namespace pnav
