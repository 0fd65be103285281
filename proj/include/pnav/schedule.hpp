#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pnav/catalog.hpp"
#include "pnav/rng.hpp"
#include "pnav/scan_graph.hpp"

namespace pnav {

// Closed timestep interval, 1-based.
struct Interval {
    int start = 1;
    int end = 1;
    int length() const { return end - start + 1; }
    bool contains(int t) const { return t >= start && t <= end; }
    bool operator==(const Interval&) const = default;
};

enum class Scheme { Random, SemiRoutine, FullyRoutine };

inline std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Random: return "random";
        case Scheme::SemiRoutine: return "semi-routine";
        case Scheme::FullyRoutine: return "fully-routine";
    }
    throw std::logic_error("unreachable scheme");
}

inline std::optional<Scheme> parse_scheme(std::string_view s) {
    if (s == "random") return Scheme::Random;
    if (s == "semi-routine") return Scheme::SemiRoutine;
    if (s == "fully-routine") return Scheme::FullyRoutine;
    return std::nullopt;
}

struct ScheduleConfig {
    int horizon = 50;                       // T
    int waiting_period = 5;                 // w: minimum interval length
    std::optional<int> max_interval_len = 25;
    std::uint64_t base_seed = 0;

    void validate() const {
        if (waiting_period < 1) throw std::invalid_argument("schedule config error: waiting period must be >= 1");
        if (horizon < waiting_period) throw std::invalid_argument("schedule config error: horizon must be >= waiting period");
        if (max_interval_len && *max_interval_len < waiting_period) {
            throw std::invalid_argument("schedule config error: max interval length must be >= waiting period");
        }
    }
};

// Random partition of [1, T] into intervals of length >= w. Lengths are drawn
// uniformly from [w, min(max_len, remaining - w)] while at least two
// w-intervals still fit; the final interval absorbs the remainder (and may
// exceed max_len by up to w-1).
inline std::vector<Interval> random_partition(int horizon, int waiting_period,
                                              std::optional<int> max_len, Rng& rng) {
    if (waiting_period < 1 || horizon < waiting_period) {
        throw std::invalid_argument("random_partition: requires T >= w >= 1");
    }
    std::vector<Interval> out;
    int start = 1;
    int remaining = horizon;
    while (remaining >= 2 * waiting_period) {
        int hi = remaining - waiting_period;
        if (max_len) hi = std::min(hi, *max_len);
        int len = rng.uniform_int(waiting_period, hi);
        out.push_back({start, start + len - 1});
        start += len;
        remaining -= len;
    }
    out.push_back({start, horizon});
    return out;
}

// Per-object interval partition plus the node occupied during each interval;
// the on-disk format is the pair of dictionaries keyed by object name.
struct PlacementSchedule {
    std::map<std::string, std::vector<Interval>> object_timesteps;
    std::map<std::string, std::vector<std::string>> object_nodes;
    int horizon = 0;
    Scheme scheme = Scheme::Random;
    int episode = 0;
    std::uint64_t seed = 0;
    int waiting_period = 0;
    std::vector<std::string> fallback_objects;  // mapped rooms absent from the scan

    std::vector<std::string> object_names() const {
        std::vector<std::string> names;
        names.reserve(object_timesteps.size());
        for (const auto& [name, _] : object_timesteps) names.push_back(name);
        return names;
    }

    std::size_t object_count() const { return object_timesteps.size(); }

    // Index of the interval containing t (binary search over starts).
    std::size_t interval_index(const std::string& object, int t) const {
        if (t < 1 || t > horizon) throw std::out_of_range("timestep out of range: " + std::to_string(t));
        auto it = object_timesteps.find(object);
        if (it == object_timesteps.end()) throw std::invalid_argument("unknown object: " + object);
        const auto& intervals = it->second;
        auto pos = std::upper_bound(intervals.begin(), intervals.end(), t,
                                    [](int value, const Interval& iv) { return value < iv.start; });
        return static_cast<std::size_t>(pos - intervals.begin()) - 1;
    }

    const std::string& object_location(const std::string& object, int t) const {
        return object_nodes.at(object)[interval_index(object, t)];
    }

    // Sorted names of the objects sitting at `node` at timestep t.
    std::vector<std::string> objects_at(const std::string& node, int t) const {
        if (t < 1 || t > horizon) throw std::out_of_range("timestep out of range: " + std::to_string(t));
        std::vector<std::string> out;
        for (const auto& [object, nodes] : object_nodes) {
            if (nodes[interval_index(object, t)] == node) out.push_back(object);
        }
        return out;
    }

    void validate() const {
        for (const auto& [object, intervals] : object_timesteps) {
            if (intervals.empty()) throw std::invalid_argument("schedule validation error: no intervals for '" + object + "'");
            if (intervals.front().start != 1) throw std::invalid_argument("schedule validation error: partition must start at 1");
            if (intervals.back().end != horizon) throw std::invalid_argument("schedule validation error: partition must end at T");
            for (std::size_t i = 0; i < intervals.size(); ++i) {
                if (intervals[i].end < intervals[i].start) {
                    throw std::invalid_argument("schedule validation error: reversed interval");
                }
                if (waiting_period > 0 && intervals[i].length() < waiting_period) {
                    throw std::invalid_argument("schedule validation error: interval shorter than waiting period");
                }
                if (i > 0 && intervals[i].start != intervals[i - 1].end + 1) {
                    throw std::invalid_argument("schedule validation error: gap or overlap in partition");
                }
            }
            auto nodes = object_nodes.find(object);
            if (nodes == object_nodes.end() || nodes->second.size() != intervals.size()) {
                throw std::invalid_argument("schedule validation error: node/interval count mismatch for '" + object + "'");
            }
        }
        if (object_nodes.size() != object_timesteps.size()) {
            throw std::invalid_argument("schedule validation error: dictionary key mismatch");
        }
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["object_timesteps"] = nlohmann::ordered_json::object();
        j["object_nodes"] = nlohmann::ordered_json::object();
        for (const auto& [object, intervals] : object_timesteps) {
            auto arr = nlohmann::ordered_json::array();
            for (const Interval& iv : intervals) arr.push_back({iv.start, iv.end});
            j["object_timesteps"][object] = std::move(arr);
        }
        for (const auto& [object, nodes] : object_nodes) j["object_nodes"][object] = nodes;
        j["meta"] = {{"scheme", std::string(scheme_name(scheme))},
                     {"episode", episode},
                     {"seed", seed},
                     {"T", horizon},
                     {"w", waiting_period}};
        return j;
    }

    static PlacementSchedule from_json(const nlohmann::json& j) {
        PlacementSchedule s;
        const auto& meta = j.at("meta");
        auto scheme = parse_scheme(meta.at("scheme").get<std::string>());
        if (!scheme) throw std::invalid_argument("schedule parse error: unknown scheme");
        s.scheme = *scheme;
        s.episode = meta.at("episode").get<int>();
        s.seed = meta.at("seed").get<std::uint64_t>();
        s.horizon = meta.at("T").get<int>();
        s.waiting_period = meta.at("w").get<int>();
        for (const auto& [object, arr] : j.at("object_timesteps").items()) {
            std::vector<Interval> intervals;
            for (const auto& pair : arr) intervals.push_back({pair.at(0).get<int>(), pair.at(1).get<int>()});
            s.object_timesteps[object] = std::move(intervals);
        }
        for (const auto& [object, arr] : j.at("object_nodes").items()) {
            s.object_nodes[object] = arr.get<std::vector<std::string>>();
        }
        s.validate();
        return s;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write schedule file: " + path);
        out << to_json().dump(2) << "\n";
    }

    static PlacementSchedule load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open schedule file: " + path);
        nlohmann::json j;
        in >> j;
        return from_json(j);
    }
};

// Builds one episode's placement schedule. Pure function of its arguments:
// every object gets an independent RNG stream derived from (base seed, object
// name, episode), with the episode pinned to 0 under the fully-routine scheme
// so every episode replays the first one.
inline PlacementSchedule build_schedule(const ScanGraph& scan, const PortableObjectCatalog& catalog,
                                        const ScheduleConfig& cfg, Scheme scheme, int episode) {
    cfg.validate();
    if (scan.size() == 0) throw std::invalid_argument("build_schedule: empty scan");
    if (episode < 0) throw std::invalid_argument("build_schedule: negative episode");

    // Fully-routine replays the first episode's dictionaries, so the episode
    // recorded (and serialized) is the effective one.
    int effective_episode = (scheme == Scheme::FullyRoutine) ? 0 : episode;

    PlacementSchedule schedule;
    schedule.horizon = cfg.horizon;
    schedule.scheme = scheme;
    schedule.episode = effective_episode;
    schedule.seed = cfg.base_seed;
    schedule.waiting_period = cfg.waiting_period;
    auto rooms_in_scan = scan.rooms_present();

    for (const std::string& object : catalog.objects) {
        Rng rng(seed_combine({cfg.base_seed, fnv1a64(object), static_cast<std::uint64_t>(effective_episode)}));
        auto intervals = random_partition(cfg.horizon, cfg.waiting_period, cfg.max_interval_len, rng);

        std::vector<std::size_t> pool;  // node indices eligible for this object
        bool routine = scheme != Scheme::Random;
        std::vector<RoomLabel> usable_rooms;
        if (routine) {
            for (RoomLabel r : catalog.rooms_of(object)) {
                if (rooms_in_scan.count(r)) usable_rooms.push_back(r);
            }
            if (usable_rooms.empty()) {
                schedule.fallback_objects.push_back(object);
                routine = false;
            }
        }

        std::vector<std::string> nodes;
        nodes.reserve(intervals.size());
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            std::size_t node_index;
            if (routine) {
                RoomLabel room = usable_rooms[rng.uniform_index(usable_rooms.size())];
                auto members = scan.node_indices_in_room(room);
                node_index = members[rng.uniform_index(members.size())];
            } else {
                node_index = rng.uniform_index(scan.size());
            }
            nodes.push_back(scan.node(node_index).id);
        }
        schedule.object_timesteps[object] = std::move(intervals);
        schedule.object_nodes[object] = std::move(nodes);
    }
    schedule.validate();
    return schedule;
}

}  // namespace pnav
