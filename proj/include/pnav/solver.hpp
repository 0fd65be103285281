#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnav/schedule.hpp"
#include "pnav/scan_graph.hpp"

namespace pnav {

// Ground-truth optimum: the most distinct objects any move sequence of length
// T can collect, by dynamic programming over (timestep, node, found-mask).
// Capped at 12 objects to bound the state space. allow_wait adds a
// self-transition that collects nothing, mirroring the engine's penalized
// invalid action; with it the result upper-bounds every realizable agent
// behavior, including stalling.
struct OptimalResult {
    int max_objects = 0;
    std::vector<std::string> path;                 // witness, length <= T+1, starts at start
    std::map<std::string, int> per_start_values;   // optimum from every start node
};

namespace detail {

// mask of objects present at (node, t) for each t in [1, T]
inline std::vector<std::vector<std::uint16_t>> placement_masks(const ScanGraph& scan,
                                                               const PlacementSchedule& schedule,
                                                               const std::vector<std::string>& objects,
                                                               int horizon) {
    std::vector<std::vector<std::uint16_t>> masks(static_cast<std::size_t>(horizon) + 1,
                                                  std::vector<std::uint16_t>(scan.size(), 0));
    for (std::size_t k = 0; k < objects.size(); ++k) {
        for (int t = 1; t <= horizon; ++t) {
            const std::string& node = schedule.object_location(objects[k], t);
            masks[static_cast<std::size_t>(t)][scan.index_of(node)] |= static_cast<std::uint16_t>(1u << k);
        }
    }
    return masks;
}

}  // namespace detail

inline OptimalResult optimal_value(const ScanGraph& scan, const PlacementSchedule& schedule,
                                   const std::string& start, int horizon = -1, bool allow_wait = false) {
    if (horizon < 0) horizon = schedule.horizon;
    if (horizon > schedule.horizon) throw std::invalid_argument("optimal_value: horizon exceeds schedule");
    auto objects = schedule.object_names();
    if (objects.size() > 12) throw std::invalid_argument("optimal_value: more than 12 objects");
    std::size_t start_index = scan.index_of(start);

    const std::size_t n = scan.size();
    const std::size_t mask_count = 1u << objects.size();
    auto masks = detail::placement_masks(scan, schedule, objects, horizon);

    auto popcount = [](std::size_t m) { return static_cast<int>(__builtin_popcountll(m)); };

    // value layers over t: layers[t][node * mask_count + mask] = most objects
    // reachable by the horizon given the position and what is already found.
    std::vector<std::vector<std::int8_t>> layers(static_cast<std::size_t>(horizon) + 1);
    layers[static_cast<std::size_t>(horizon)].resize(n * mask_count);
    for (std::size_t node = 0; node < n; ++node) {
        for (std::size_t mask = 0; mask < mask_count; ++mask) {
            layers[static_cast<std::size_t>(horizon)][node * mask_count + mask] =
                static_cast<std::int8_t>(popcount(mask));
        }
    }
    for (int t = horizon - 1; t >= 0; --t) {
        layers[static_cast<std::size_t>(t)].assign(n * mask_count, -1);
        const auto& arrival = masks[static_cast<std::size_t>(t) + 1];
        const auto& nxt = layers[static_cast<std::size_t>(t) + 1];
        auto& here = layers[static_cast<std::size_t>(t)];
        for (std::size_t node = 0; node < n; ++node) {
            for (std::size_t mask = 0; mask < mask_count; ++mask) {
                std::int8_t best = -1;
                for (std::size_t nb : scan.neighbor_indices(node)) {
                    std::size_t nm = mask | arrival[nb];
                    best = std::max(best, nxt[nb * mask_count + nm]);
                }
                if (allow_wait) best = std::max(best, nxt[node * mask_count + mask]);
                here[node * mask_count + mask] = best;
            }
        }
    }

    OptimalResult result;
    for (std::size_t node = 0; node < n; ++node) {
        result.per_start_values[scan.node(node).id] = layers[0][node * mask_count + 0];
    }
    result.max_objects = result.per_start_values.at(start);

    // Witness path: follow the value layers forward, smallest node id first.
    std::size_t node = start_index;
    std::size_t mask = 0;
    result.path.push_back(scan.node(node).id);
    for (int t = 0; t < horizon; ++t) {
        const auto& nxt = layers[static_cast<std::size_t>(t) + 1];
        const auto& arrival = masks[static_cast<std::size_t>(t) + 1];
        std::int8_t target = layers[static_cast<std::size_t>(t)][node * mask_count + mask];
        std::size_t chosen = node;
        std::size_t chosen_mask = mask;
        bool found = false;
        for (std::size_t nb : scan.neighbor_indices(node)) {  // ascending ids
            std::size_t nm = mask | arrival[nb];
            if (nxt[nb * mask_count + nm] == target) {
                chosen = nb;
                chosen_mask = nm;
                found = true;
                break;
            }
        }
        if (!found && allow_wait && nxt[node * mask_count + mask] == target) {
            found = true;  // wait in place
        }
        if (!found) break;
        node = chosen;
        mask = chosen_mask;
        result.path.push_back(scan.node(node).id);
        if (popcount(static_cast<std::uint16_t>(mask)) == result.max_objects) break;
    }
    return result;
}

// Exact maximum by trying every move sequence; the validation oracle for the
// DP. Guarded to ~1e7 expanded sequences.
inline int enumerate_all_paths_value(const ScanGraph& scan, const PlacementSchedule& schedule,
                                     const std::string& start, int horizon = -1, bool allow_wait = false) {
    if (horizon < 0) horizon = schedule.horizon;
    std::size_t max_branch = 0;
    for (std::size_t i = 0; i < scan.size(); ++i) {
        max_branch = std::max(max_branch, scan.neighbor_indices(i).size() + (allow_wait ? 1 : 0));
    }
    double bound = std::pow(static_cast<double>(max_branch), static_cast<double>(horizon));
    if (bound > 1e7) throw std::invalid_argument("enumerate_all_paths_value: instance too large");

    auto objects = schedule.object_names();
    if (objects.size() > 16) throw std::invalid_argument("enumerate_all_paths_value: too many objects");
    auto masks = detail::placement_masks(scan, schedule, objects, horizon);

    int best = 0;
    auto dfs = [&](auto&& self, std::size_t node, int t, std::uint16_t mask) -> void {
        best = std::max(best, static_cast<int>(__builtin_popcount(mask)));
        if (t == horizon || best == static_cast<int>(objects.size())) return;
        for (std::size_t nb : scan.neighbor_indices(node)) {
            self(self, nb, t + 1, static_cast<std::uint16_t>(mask | masks[static_cast<std::size_t>(t) + 1][nb]));
        }
        if (allow_wait) self(self, node, t + 1, mask);
    };
    dfs(dfs, scan.index_of(start), 0, 0);
    return best;
}

struct VarianceReport {
    double mean = 0.0;
    double variance = 0.0;  // population variance
    std::vector<int> values;
};

// Distribution of the optimum across episodes of a scheme; the feasibility
// lens: a constant routine pins the optimum, random placement makes it drift.
inline VarianceReport optimum_variance(const ScanGraph& scan, const PortableObjectCatalog& catalog,
                                       const ScheduleConfig& cfg, Scheme scheme, const std::string& start,
                                       int episodes, bool allow_wait = false) {
    if (episodes <= 0) throw std::invalid_argument("optimum_variance: episodes must be positive");
    VarianceReport report;
    report.values.reserve(static_cast<std::size_t>(episodes));
    for (int e = 0; e < episodes; ++e) {
        PlacementSchedule schedule = build_schedule(scan, catalog, cfg, scheme, e);
        report.values.push_back(optimal_value(scan, schedule, start, -1, allow_wait).max_objects);
    }
    double sum = 0.0;
    for (int v : report.values) sum += v;
    report.mean = sum / static_cast<double>(episodes);
    double ss = 0.0;
    for (int v : report.values) ss += (v - report.mean) * (v - report.mean);
    report.variance = ss / static_cast<double>(episodes);
    return report;
}

}  // namespace pnav
