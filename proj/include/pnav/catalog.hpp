#pragma once

#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pnav/rooms.hpp"

namespace pnav {

// The 21 portable household objects and the rooms each one may occupy under
// the routine movement schemes. Objects appear in 1 to 9 rooms; phone,
// headphones and hat are the most mobile at 9 rooms each, dumbbells stay in
// the gym.
struct PortableObjectCatalog {
    std::vector<std::string> objects;                      // ordered, unique
    std::map<std::string, std::set<RoomLabel>> room_map;   // one entry per object

    bool contains(const std::string& name) const { return room_map.count(name) != 0; }

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < objects.size(); ++i) {
            if (objects[i] == name) return i;
        }
        throw std::invalid_argument("unknown object: " + name);
    }

    const std::set<RoomLabel>& rooms_of(const std::string& name) const {
        auto it = room_map.find(name);
        if (it == room_map.end()) throw std::invalid_argument("unknown object: " + name);
        return it->second;
    }

    // Number of catalog objects mapped to a room (the scripted oracle's room
    // prior). Other is never mapped.
    int portables_mapped_to(RoomLabel room) const {
        int count = 0;
        for (const auto& [obj, rooms] : room_map) count += rooms.count(room) ? 1 : 0;
        return count;
    }

    void validate() const {
        if (objects.empty()) throw std::invalid_argument("catalog validation error: empty catalog");
        std::set<std::string> seen;
        for (const std::string& o : objects) {
            if (!seen.insert(o).second) throw std::invalid_argument("catalog validation error: duplicate object '" + o + "'");
            auto it = room_map.find(o);
            if (it == room_map.end()) throw std::invalid_argument("catalog validation error: no rooms for '" + o + "'");
            if (it->second.empty() || it->second.size() > 9) {
                throw std::invalid_argument("catalog validation error: '" + o + "' must map to 1-9 rooms");
            }
            if (it->second.count(RoomLabel::Other)) {
                throw std::invalid_argument("catalog validation error: '" + o + "' mapped to Other");
            }
        }
        if (room_map.size() != objects.size()) {
            throw std::invalid_argument("catalog validation error: room_map/object list mismatch");
        }
    }

    PortableObjectCatalog subset(const std::vector<std::string>& names) const {
        PortableObjectCatalog out;
        for (const std::string& n : names) {
            out.objects.push_back(n);
            out.room_map[n] = rooms_of(n);
        }
        out.validate();
        return out;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["objects"] = nlohmann::ordered_json::object();
        for (const std::string& o : objects) {
            nlohmann::ordered_json rooms = nlohmann::ordered_json::array();
            for (RoomLabel r : room_map.at(o)) rooms.push_back(std::string(room_name(r)));
            j["objects"][o] = std::move(rooms);
        }
        return j;
    }

    static PortableObjectCatalog from_json(const nlohmann::json& j) {
        PortableObjectCatalog c;
        if (!j.is_object() || !j.contains("objects")) {
            throw std::invalid_argument("catalog parse error: expected object with 'objects'");
        }
        for (const auto& [name, rooms] : j.at("objects").items()) {
            c.objects.push_back(name);
            std::set<RoomLabel> rs;
            for (const auto& r : rooms) {
                auto parsed = parse_room(r.get<std::string>());
                if (!parsed) throw std::invalid_argument("catalog parse error: unknown room '" + r.get<std::string>() + "'");
                rs.insert(*parsed);
            }
            c.room_map[name] = std::move(rs);
        }
        c.validate();
        return c;
    }

    static PortableObjectCatalog load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open catalog file: " + path);
        nlohmann::json j;
        in >> j;
        return from_json(j);
    }
};

inline const PortableObjectCatalog& default_catalog() {
    static const PortableObjectCatalog catalog = [] {
        using R = RoomLabel;
        PortableObjectCatalog c;
        auto add = [&](const std::string& name, std::set<R> rooms) {
            c.objects.push_back(name);
            c.room_map[name] = std::move(rooms);
        };
        add("bowl", {R::Dining, R::Kitchen});
        add("charger", {R::Bedroom, R::Dining, R::Office, R::Lounge});
        add("dice", {R::Lounge, R::Recreation});
        add("dumbbells", {R::Gym});
        add("first-aid kit", {R::Bathroom, R::Kitchen});
        add("flashlight", {R::Garage});
        add("hat", {R::Bedroom, R::Garage, R::Dining, R::Office, R::Kitchen, R::Lounge, R::Gym, R::Outdoor, R::Recreation});
        add("headphones", {R::Bedroom, R::Garage, R::Dining, R::Office, R::Kitchen, R::Lounge, R::Gym, R::Outdoor, R::Recreation});
        add("jumprope", {R::Gym, R::Outdoor});
        add("laptop", {R::Bedroom, R::Office, R::Lounge});
        add("mug", {R::Bedroom, R::Garage, R::Dining, R::Office, R::Kitchen, R::Lounge});
        add("notebook", {R::Bedroom, R::Office});
        add("phone", {R::Bedroom, R::Garage, R::Dining, R::Office, R::Bathroom, R::Kitchen, R::Lounge, R::Gym, R::Outdoor});
        add("playing cards", {R::Lounge, R::Recreation});
        add("portable speaker", {R::Dining, R::Lounge, R::Outdoor});
        add("salt and pepper shakers", {R::Dining, R::Kitchen});
        add("screwdriver", {R::Garage});
        add("smartwatch", {R::Bedroom, R::Gym, R::Outdoor});
        add("toothbrush", {R::Bedroom, R::Bathroom});
        add("usb flash drive", {R::Bedroom, R::Office, R::Lounge});
        add("water bottle", {R::Bedroom, R::Dining, R::Lounge, R::Outdoor, R::Recreation});
        c.validate();
        return c;
    }();
    return catalog;
}

}  // namespace pnav
