#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pnav/rng.hpp"

namespace pnav {

// The ten named room types plus Other for nodes hosting no portable objects
// under the routine schemes.
enum class RoomLabel {
    Bedroom,
    Garage,
    Dining,
    Office,
    Bathroom,
    Kitchen,
    Lounge,
    Gym,
    Outdoor,
    Recreation,
    Other,
};

constexpr int kRoomCount = 11;

inline const std::array<RoomLabel, kRoomCount>& all_rooms() {
    static const std::array<RoomLabel, kRoomCount> rooms = {
        RoomLabel::Bedroom, RoomLabel::Garage,  RoomLabel::Dining,
        RoomLabel::Office,  RoomLabel::Bathroom, RoomLabel::Kitchen,
        RoomLabel::Lounge,  RoomLabel::Gym,      RoomLabel::Outdoor,
        RoomLabel::Recreation, RoomLabel::Other,
    };
    return rooms;
}

inline std::string_view room_name(RoomLabel r) {
    switch (r) {
        case RoomLabel::Bedroom: return "Bedroom";
        case RoomLabel::Garage: return "Garage";
        case RoomLabel::Dining: return "Dining";
        case RoomLabel::Office: return "Office";
        case RoomLabel::Bathroom: return "Bathroom";
        case RoomLabel::Kitchen: return "Kitchen";
        case RoomLabel::Lounge: return "Lounge";
        case RoomLabel::Gym: return "Gym";
        case RoomLabel::Outdoor: return "Outdoor";
        case RoomLabel::Recreation: return "Recreation";
        case RoomLabel::Other: return "Other";
    }
    throw std::logic_error("unreachable room label");
}

inline std::optional<RoomLabel> parse_room(std::string_view s) {
    for (RoomLabel r : all_rooms()) {
        if (room_name(r) == s) return r;
    }
    return std::nullopt;
}

// Fixed room -> furniture table. These are the static scene labels attached to
// nodes; each furniture name belongs to exactly one room so the inverse lookup
// used by the scripted decision oracle is a function.
inline const std::vector<std::string>& room_furniture(RoomLabel r) {
    static const std::map<RoomLabel, std::vector<std::string>> table = {
        {RoomLabel::Bedroom,
         {"bed", "wardrobe", "nightstand", "dresser", "pillow", "blanket", "alarm clock", "reading lamp"}},
        {RoomLabel::Garage,
         {"workbench", "toolbox", "ladder", "paint can", "drill", "tire", "lawnmower", "bicycle"}},
        {RoomLabel::Dining,
         {"dining table", "sideboard", "chandelier", "placemat", "wine rack", "serving tray", "napkin holder",
          "china cabinet"}},
        {RoomLabel::Office,
         {"desk", "office chair", "monitor", "keyboard", "printer", "filing cabinet", "whiteboard", "stapler"}},
        {RoomLabel::Bathroom,
         {"toilet", "sink", "bathtub", "shower curtain", "towel rack", "bath mat", "soap dispenser", "hamper"}},
        {RoomLabel::Kitchen,
         {"stove", "refrigerator", "oven", "microwave", "kettle", "cutting board", "spice rack", "dishwasher"}},
        {RoomLabel::Lounge,
         {"sofa", "coffee table", "television", "armchair", "bookshelf", "rug", "floor cushion", "magazine rack"}},
        {RoomLabel::Gym,
         {"treadmill", "exercise bike", "yoga mat", "bench press", "kettlebell", "rowing machine", "pull-up bar",
          "foam roller"}},
        {RoomLabel::Outdoor,
         {"grill", "patio chair", "flower pot", "garden hose", "umbrella", "bird feeder", "wheelbarrow", "lantern"}},
        {RoomLabel::Recreation,
         {"pool table", "dartboard", "board game", "beanbag", "game console", "foosball table", "puzzle",
          "air hockey table"}},
        {RoomLabel::Other, {"box", "shelf", "lamp", "mirror", "clock", "plant", "basket", "stool"}},
    };
    return table.at(r);
}

// Inverse of room_furniture. Unknown labels return nullopt.
inline std::optional<RoomLabel> furniture_room(std::string_view name) {
    static const std::map<std::string, RoomLabel, std::less<>> inverse = [] {
        std::map<std::string, RoomLabel, std::less<>> m;
        for (RoomLabel r : all_rooms()) {
            for (const std::string& f : room_furniture(r)) m.emplace(f, r);
        }
        return m;
    }();
    auto it = inverse.find(name);
    if (it == inverse.end()) return std::nullopt;
    return it->second;
}

// 3-8 furniture labels per node, a pure function of (node id, room) so that a
// scan loaded from disk and the scan that produced the file agree.
inline std::vector<std::string> derive_scene_objects(std::string_view node_id, RoomLabel room) {
    const std::vector<std::string>& pool = room_furniture(room);
    Rng rng(seed_combine({fnv1a64("scene"), fnv1a64(node_id), fnv1a64(room_name(room))}));
    int count = rng.uniform_int(3, 8);
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) {
        std::size_t j = rng.uniform_index(i);
        std::swap(order[i - 1], order[j]);
    }
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(pool[order[static_cast<std::size_t>(i)]]);
    return out;
}

}  // namespace pnav
