#pragma once

#include "pnav/bench.hpp"
#include "pnav/catalog.hpp"
#include "pnav/scan_graph.hpp"
#include "pnav/schedule.hpp"

namespace pnav::presets {

// ---------------------------------------------------------------------------
// Desk benchmark: the small fixed instance the feasibility and memory
// ordering studies run on. 20 nodes, 5 portable objects whose rooms sit away
// from the furniture-heavy rooms the scripted walker gravitates to, T = 30.

constexpr std::uint64_t kDeskScanSeed = 12;
constexpr int kDeskScanNodes = 20;
constexpr int kDeskHorizon = 30;

inline const std::map<RoomLabel, double>& desk_room_mix() {
    static const std::map<RoomLabel, double> mix = {
        {RoomLabel::Bedroom, 1.0}, {RoomLabel::Garage, 1.0},  {RoomLabel::Dining, 1.0},
        {RoomLabel::Bathroom, 1.0}, {RoomLabel::Kitchen, 1.0}, {RoomLabel::Lounge, 1.0},
        {RoomLabel::Gym, 1.0},      {RoomLabel::Outdoor, 1.0},
    };
    return mix;
}

inline const ScanGraph& desk_scan() {
    static const ScanGraph scan = generate_synthetic_scan(kDeskScanSeed, kDeskScanNodes, desk_room_mix());
    return scan;
}

inline const PortableObjectCatalog& desk_catalog() {
    static const PortableObjectCatalog catalog = default_catalog().subset(
        {"bowl", "dumbbells", "first-aid kit", "jumprope", "salt and pepper shakers"});
    return catalog;
}

inline ScheduleConfig desk_schedule_config(std::uint64_t base_seed = 0) {
    ScheduleConfig cfg;
    cfg.horizon = kDeskHorizon;
    cfg.waiting_period = 5;
    cfg.max_interval_len = 25;
    cfg.base_seed = base_seed;
    return cfg;
}

inline BenchProtocol paper_protocol() { return {10, 20, 30}; }

// ---------------------------------------------------------------------------
// Paper-scale preset: 53 nodes, 10 portable objects, 50-step episodes, 2000
// training episodes.

constexpr std::uint64_t kPaperScanSeed = 7;
constexpr int kPaperScanNodes = 53;
constexpr int kPaperHorizon = 50;
constexpr int kPaperTrainingEpisodes = 2000;

inline const ScanGraph& paper_scale_scan() {
    static const ScanGraph scan = generate_synthetic_scan(kPaperScanSeed, kPaperScanNodes, uniform_room_mix());
    return scan;
}

inline const PortableObjectCatalog& paper_scale_catalog() {
    static const PortableObjectCatalog catalog = default_catalog().subset(
        {"charger", "dumbbells", "hat", "headphones", "laptop", "mug", "phone", "screwdriver", "toothbrush",
         "water bottle"});
    return catalog;
}

inline ScheduleConfig paper_scale_schedule_config(std::uint64_t base_seed = 0) {
    ScheduleConfig cfg;
    cfg.horizon = kPaperHorizon;
    cfg.waiting_period = 5;
    cfg.max_interval_len = 25;
    cfg.base_seed = base_seed;
    return cfg;
}

}  // namespace pnav::presets
