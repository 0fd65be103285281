#pragma once

#include <cassert>
#include <functional>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pnav/schedule.hpp"
#include "pnav/scan_graph.hpp"

namespace pnav {

// Agent-facing observation: one adjacency bit per scan node plus the timestep
// as the final element.
struct Observation {
    std::vector<std::uint8_t> adjacency;
    int timestep = 0;

    std::size_t size() const { return adjacency.size() + 1; }
};

// Outcome of one transition. reward == |found_now| - (invalid ? 1 : 0).
struct StepResult {
    int reward = 0;
    std::vector<std::string> found_now;
    Observation observation;
    bool done = false;
    bool invalid_action = false;
};

struct StepRecord {
    int t = 0;
    std::string node;
    int action = -1;
    int reward = 0;
    bool invalid = false;
    std::vector<std::string> found_now;
};

struct EpisodeTrace {
    std::string start_node;
    std::vector<StepRecord> steps;
    int total_reward = 0;
    std::vector<std::string> found;  // unique objects, in discovery order
    std::map<std::string, int> visit_counts;

    bool success() const { return !found.empty(); }

    std::string to_csv() const {
        std::ostringstream out;
        out << "t,node,action,reward,invalid,found_now\n";
        for (const StepRecord& s : steps) {
            out << s.t << ',' << s.node << ',' << s.action << ',' << s.reward << ',' << (s.invalid ? 1 : 0) << ',';
            for (std::size_t i = 0; i < s.found_now.size(); ++i) {
                if (i) out << ';';
                out << s.found_now[i];
            }
            out << '\n';
        }
        return out.str();
    }

    nlohmann::ordered_json summary_json() const {
        nlohmann::ordered_json j;
        j["start"] = start_node;
        j["steps"] = steps.size();
        j["total_reward"] = total_reward;
        j["unique_found"] = found.size();
        j["found"] = found;
        j["success"] = success();
        j["visit_counts"] = visit_counts;
        return j;
    }
};

// Object lists visible at one node: static furniture plus whatever portables
// the schedule currently places there.
struct NodeSummary {
    std::string node_id;
    std::vector<std::string> scene_objects;
    std::vector<std::string> portable_objects;
};

// The episode MDP. Movement is by node index; picking a non-adjacent index
// wastes the step at a -1 penalty and leaves the agent in place. The episode
// ends when every scheduled object has been found or t reaches the horizon.
class EpisodeEngine {
public:
    EpisodeEngine(const ScanGraph& scan, const PlacementSchedule& schedule)
        : scan_(scan), schedule_(schedule), all_objects_(schedule.object_names()) {}

    const ScanGraph& scan() const { return scan_; }
    const PlacementSchedule& schedule() const { return schedule_; }
    int horizon() const { return schedule_.horizon; }

    Observation reset(const std::string& start_id) {
        current_ = scan_.index_of(start_id);
        t_ = 0;
        done_ = false;
        found_.clear();
        found_order_.clear();
        visit_counts_.clear();
        visit_counts_[scan_.node(current_).id] = 1;
        return observe();
    }

    Observation reset_random(std::uint64_t seed) {
        Rng rng(seed_combine({fnv1a64("episode-start"), seed}));
        return reset(scan_.node(rng.uniform_index(scan_.size())).id);
    }

    StepResult step(int action_index) {
        if (done_) throw std::logic_error("step after episode end");
        if (action_index < 0 || action_index >= static_cast<int>(scan_.size())) {
            throw std::invalid_argument("action index out of range");
        }
        StepResult result;
        std::size_t target = static_cast<std::size_t>(action_index);
        ++t_;
        if (scan_.adjacent(current_, target)) {
            current_ = target;
            for (const std::string& obj : schedule_.objects_at(scan_.node(current_).id, t_)) {
                if (found_.insert(obj).second) {
                    found_order_.push_back(obj);
                    result.found_now.push_back(obj);
                }
            }
            result.reward = static_cast<int>(result.found_now.size());
        } else {
            result.invalid_action = true;
            result.reward = -1;
        }
        visit_counts_[scan_.node(current_).id] += 1;
        done_ = (found_.size() == all_objects_.size()) || (t_ >= schedule_.horizon);
        result.done = done_;
        result.observation = observe();
        return result;
    }

    Observation observe() const {
        Observation obs;
        obs.adjacency.assign(scan_.size(), 0);
        for (std::size_t j : scan_.neighbor_indices(current_)) obs.adjacency[j] = 1;
        obs.timestep = t_;
        assert([&] {
            auto expect = scan_.neighbor_indices(current_);
            std::size_t ones = 0;
            for (std::size_t i = 0; i < obs.adjacency.size(); ++i) {
                if (obs.adjacency[i]) {
                    ++ones;
                    if (!std::binary_search(expect.begin(), expect.end(), i)) return false;
                }
            }
            return ones == expect.size();
        }());
        return obs;
    }

    // World state shown to decision policies; placement is defined on [1, T],
    // so before the first step the agent sees the t = 1 state.
    int observe_time() const { return std::max(1, t_); }

    NodeSummary node_summary(std::size_t node_index) const {
        const NodeRecord& n = scan_.node(node_index);
        return {n.id, n.scene_objects, schedule_.objects_at(n.id, observe_time())};
    }

    std::size_t current_index() const { return current_; }
    const std::string& current_id() const { return scan_.node(current_).id; }
    int t() const { return t_; }
    bool done() const { return done_; }
    const std::set<std::string>& found() const { return found_; }
    const std::vector<std::string>& found_order() const { return found_order_; }
    const std::map<std::string, int>& visit_counts() const { return visit_counts_; }

private:
    const ScanGraph& scan_;
    const PlacementSchedule& schedule_;
    std::vector<std::string> all_objects_;
    std::size_t current_ = 0;
    int t_ = 0;
    bool done_ = false;
    std::set<std::string> found_;
    std::vector<std::string> found_order_;
    std::map<std::string, int> visit_counts_;
};

// Everything a decision policy may look at when choosing the next hop.
struct DecisionContext {
    const EpisodeEngine& engine;
    const Observation& observation;

    std::size_t current() const { return engine.current_index(); }
    int t() const { return engine.t(); }
    int remaining() const { return engine.horizon() - engine.t(); }
};

using Policy = std::function<int(const DecisionContext&)>;

inline EpisodeTrace run_episode(EpisodeEngine& engine, const Policy& policy, const std::string& start_id) {
    EpisodeTrace trace;
    Observation obs = engine.reset(start_id);
    trace.start_node = start_id;
    while (!engine.done()) {
        int action;
        try {
            action = policy(DecisionContext{engine, obs});
        } catch (const std::exception& e) {
            throw std::runtime_error("policy failure at step " + std::to_string(engine.t()) + ": " + e.what());
        }
        StepResult result = engine.step(action);
        trace.steps.push_back({engine.t(), engine.current_id(), action, result.reward, result.invalid_action,
                               result.found_now});
        trace.total_reward += result.reward;
        obs = std::move(result.observation);
    }
    trace.found = engine.found_order();
    trace.visit_counts = engine.visit_counts();
    return trace;
}

}  // namespace pnav
