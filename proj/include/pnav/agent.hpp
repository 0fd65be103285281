#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnav/catalog.hpp"
#include "pnav/episode.hpp"
#include "pnav/memory.hpp"
#include "pnav/oracle.hpp"
#include "pnav/rng.hpp"

namespace pnav {

enum class AgentVariant { Memoryless, CompleteMemory, SelectiveMemory };

inline std::string_view agent_variant_name(AgentVariant v) {
    switch (v) {
        case AgentVariant::Memoryless: return "memoryless";
        case AgentVariant::CompleteMemory: return "complete";
        case AgentVariant::SelectiveMemory: return "selective";
    }
    throw std::logic_error("unreachable agent variant");
}

inline std::optional<AgentVariant> parse_agent_variant(std::string_view s) {
    if (s == "memoryless") return AgentVariant::Memoryless;
    if (s == "complete") return AgentVariant::CompleteMemory;
    if (s == "selective") return AgentVariant::SelectiveMemory;
    return std::nullopt;
}

struct AgentDiagnostics {
    int oracle_fallbacks = 0;   // llm reply unusable, scripted stand-in used
    int mapping_failures = 0;   // chosen object not mappable to a node
    int plans_started = 0;
    int plans_declined = 0;
    int plan_aborts = 0;
};

// Object-list decision policy over adjacent nodes, with optional complete
// (FIFO buffer) or selective (memory tree + traceback) memory. Memory
// persists across episodes; construct a fresh agent to wipe it.
//
// Every action this agent emits is adjacent to the current node, so it never
// triggers the engine's invalid-action penalty.
class LgxAgent {
public:
    LgxAgent(AgentVariant variant, Oracle& oracle, const PortableObjectCatalog& catalog,
             std::uint64_t seed = 0, std::size_t buffer_horizon = 50)
        : variant_(variant),
          oracle_(oracle),
          catalog_(catalog),
          buffer_(buffer_horizon),
          rng_(seed_combine({fnv1a64("lgx-agent"), seed})) {}

    AgentVariant variant() const { return variant_; }
    const AgentDiagnostics& diagnostics() const { return diagnostics_; }
    const MemoryBuffer& buffer() const { return buffer_; }
    const MemoryTree& tree() const { return tree_; }

    // Call at every episode start, after the engine reset.
    void begin_episode(const EpisodeEngine& engine) {
        active_plan_.reset();
        plan_cursor_ = 0;
        spent_terminals_.clear();
        if (variant_ == AgentVariant::SelectiveMemory) {
            tree_.anchor(engine.current_id(), engine.t());
        }
    }

    int act(const DecisionContext& ctx) {
        const EpisodeEngine& engine = ctx.engine;
        auto candidates = collect_candidates(engine);

        if (variant_ == AgentVariant::SelectiveMemory) {
            resync_tree_position(engine);
            record_observations(engine, candidates);

            if (active_plan_) {
                if (auto action = advance_plan(engine)) return *action;
            } else if (auto plan = next_plan(engine)) {
                OracleResponse verdict = oracle_.complete(make_traceback_request(*plan, ctx.remaining()));
                if (verdict.used_fallback) ++diagnostics_.oracle_fallbacks;
                spent_terminals_.insert(plan->terminal_tree_node);
                if (verdict.answer == "YES") {
                    ++diagnostics_.plans_started;
                    active_plan_ = std::move(plan);
                    plan_cursor_ = 0;
                    if (auto action = advance_plan(engine)) return *action;
                } else {
                    ++diagnostics_.plans_declined;
                }
            }
        }

        // memoryless base behavior (also the complete variant, which adds the
        // buffer to the request)
        std::vector<std::string> names;
        names.reserve(candidates.size());
        for (const auto& [name, _] : candidates) names.push_back(name);

        OracleRequest request =
            (variant_ == AgentVariant::CompleteMemory)
                ? make_choose_request(names, complete_memory_context(buffer_), buffer_.choices())
                : make_choose_request(names);
        OracleResponse response = oracle_.complete(request);
        if (response.used_fallback) ++diagnostics_.oracle_fallbacks;

        std::size_t target;
        auto hit = candidates.find(response.answer);
        if (hit != candidates.end()) {
            target = hit->second;
        } else {
            ++diagnostics_.mapping_failures;
            const auto& adj = engine.scan().neighbor_indices(engine.current_index());
            target = adj[rng_.uniform_index(adj.size())];
        }

        if (variant_ == AgentVariant::CompleteMemory) {
            buffer_.push({names, response.answer});
        }
        if (variant_ == AgentVariant::SelectiveMemory && hit != candidates.end()) {
            auto chosen = chosen_tree_child_.find(response.answer);
            if (chosen != chosen_tree_child_.end()) tree_.set_position(chosen->second);
        }
        return static_cast<int>(target);
    }

    Policy as_policy() {
        return [this](const DecisionContext& ctx) { return act(ctx); };
    }

private:
    // object -> adjacent node index holding it; ties resolved toward the
    // smallest node id. Map keys double as the sorted candidate name list.
    std::map<std::string, std::size_t> collect_candidates(const EpisodeEngine& engine) const {
        std::map<std::string, std::size_t> out;
        const ScanGraph& scan = engine.scan();
        for (std::size_t nb : scan.neighbor_indices(engine.current_index())) {
            NodeSummary summary = engine.node_summary(nb);
            auto offer = [&](const std::string& obj) {
                auto it = out.find(obj);
                if (it == out.end() || scan.node(nb).id < scan.node(it->second).id) out[obj] = nb;
            };
            for (const std::string& s : summary.scene_objects) offer(s);
            for (const std::string& p : summary.portable_objects) offer(p);
        }
        return out;
    }

    void resync_tree_position(const EpisodeEngine& engine) {
        const std::string& here = engine.current_id();
        if (tree_.position() != MemoryTree::kRoot && tree_.node(tree_.position()).graph_node == here) return;
        tree_.anchor(here, engine.t());
    }

    void record_observations(const EpisodeEngine& engine, const std::map<std::string, std::size_t>& candidates) {
        chosen_tree_child_.clear();
        for (const auto& [object, node_index] : candidates) {
            std::size_t id = tree_.record(tree_.position(), engine.observe_time(), object,
                                          engine.scan().node(node_index).id, catalog_.contains(object));
            chosen_tree_child_[object] = id;
        }
    }

    std::optional<TracebackPlan> next_plan(const EpisodeEngine& engine) {
        std::set<std::size_t> excluded = spent_terminals_;
        for (const std::string& obj : engine.found()) {
            for (std::size_t id : tree_.nodes_for_object(obj)) excluded.insert(id);
        }
        return tree_.find_nearest_portable_path(tree_.position(), excluded);
    }

    // Next hop of the active plan, or nullopt when the plan is exhausted or no
    // longer walkable (then the caller falls back to the base behavior).
    std::optional<int> advance_plan(const EpisodeEngine& engine) {
        if (plan_cursor_ >= active_plan_->node_chain.size()) {
            active_plan_.reset();
            return std::nullopt;
        }
        const std::string& next_id = active_plan_->node_chain[plan_cursor_];
        std::size_t next_index = engine.scan().index_of(next_id);
        if (!engine.scan().adjacent(engine.current_index(), next_index)) {
            ++diagnostics_.plan_aborts;
            active_plan_.reset();
            return std::nullopt;
        }
        ++plan_cursor_;
        if (plan_cursor_ >= active_plan_->node_chain.size()) active_plan_.reset();
        return static_cast<int>(next_index);
    }

    AgentVariant variant_;
    Oracle& oracle_;
    const PortableObjectCatalog& catalog_;
    MemoryBuffer buffer_;
    MemoryTree tree_;
    std::map<std::string, std::size_t> chosen_tree_child_;
    std::optional<TracebackPlan> active_plan_;
    std::size_t plan_cursor_ = 0;
    std::set<std::size_t> spent_terminals_;  // chased or declined this episode
    Rng rng_;
    AgentDiagnostics diagnostics_;
};

// Seeded uniform random walk over neighbors; baseline and test policy.
inline Policy random_walk_policy(std::uint64_t seed) {
    auto rng = std::make_shared<Rng>(seed_combine({fnv1a64("random-walk"), seed}));
    return [rng](const DecisionContext& ctx) {
        const auto& adj = ctx.engine.scan().neighbor_indices(ctx.current());
        return static_cast<int>(adj[rng->uniform_index(adj.size())]);
    };
}

}  // namespace pnav
