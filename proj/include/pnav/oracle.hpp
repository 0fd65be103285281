#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "pnav/catalog.hpp"
#include "pnav/memory.hpp"
#include "pnav/rooms.hpp"

namespace pnav {

enum class OracleMode { ChooseObject, YesNo };

struct OracleRequest {
    std::string system_context;
    std::string user_query;
    std::vector<std::string> candidates;   // ChooseObject: non-empty
    OracleMode mode = OracleMode::ChooseObject;
    // Structured duplicates of what the prompts carry, for the scripted oracle.
    std::vector<std::string> history;      // past choices, oldest first
    int traceback_cost = 0;                // K
    int remaining_steps = 0;
};

struct OracleResponse {
    std::string answer;        // canonical candidate name, or "YES"/"NO"
    bool used_fallback = false;
};

class Oracle {
public:
    virtual ~Oracle() = default;
    virtual OracleResponse complete(const OracleRequest& request) = 0;
};

// ---------------------------------------------------------------------------
// Prompt templates. Rendering is byte-stable; golden tests pin these strings.

inline std::string render_object_list(const std::vector<std::string>& objects) {
    std::string out;
    for (std::size_t i = 0; i < objects.size(); ++i) {
        if (i) out += ", ";
        out += objects[i];
    }
    return out;
}

inline std::string base_system_prompt() {
    return "I am a smart robot trying to find as many portable objects as I can at home.";
}

inline std::string choose_object_query(const std::vector<std::string>& candidates) {
    return "Which object from " + render_object_list(candidates) +
           " should I go towards to find a new portable object? Reply in ONE word.";
}

inline std::string complete_memory_context(const MemoryBuffer& buffer) {
    std::string out = base_system_prompt();
    out += "\nI have seen the following objects and taken the following actions so far - ";
    std::size_t k = 1;
    for (const MemoryBuffer::Entry& e : buffer.entries()) {
        out += "\n" + std::to_string(k++) + ". " + render_object_list(e.objects) + ": " + e.choice;
    }
    return out;
}

inline std::string traceback_context(const TracebackPlan& plan) {
    std::string out = base_system_prompt();
    out += "\nI have found the following path (object chain) to a portable object from the current observation. It takes " +
           std::to_string(plan.cost) + " timesteps - ";
    std::string trace;
    for (std::size_t i = 0; i < plan.object_chain.size(); ++i) {
        if (i) trace += " -> ";
        trace += plan.object_chain[i];
    }
    out += "\n1. " + plan.object_chain.back() + ": " + trace;
    return out;
}

inline std::string traceback_query() {
    return "Should I follow the action traceback? Reply with YES/NO.";
}

inline OracleRequest make_choose_request(const std::vector<std::string>& candidates,
                                         const std::string& system_context = base_system_prompt(),
                                         std::vector<std::string> history = {}) {
    OracleRequest r;
    r.system_context = system_context;
    r.user_query = choose_object_query(candidates);
    r.candidates = candidates;
    r.mode = OracleMode::ChooseObject;
    r.history = std::move(history);
    return r;
}

inline OracleRequest make_traceback_request(const TracebackPlan& plan, int remaining_steps) {
    OracleRequest r;
    r.system_context = traceback_context(plan);
    r.user_query = traceback_query();
    r.mode = OracleMode::YesNo;
    r.traceback_cost = plan.cost;
    r.remaining_steps = remaining_steps;
    return r;
}

// ---------------------------------------------------------------------------
// Scripted oracle: a deterministic stand-in for the language model.
//
// ChooseObject prefers a portable candidate (lexicographically smallest).
// Otherwise candidates are furniture; the pick is the one whose room hosts the
// most catalog portables. When the request carries a choice history (the
// complete-memory agent sends its buffer), previously chosen furniture is
// skipped while alternatives remain — the history-conditioned behavior the
// memory prompt is meant to induce. YesNo approves a traceback iff it fits in
// the remaining timesteps.
class ScriptedOracle : public Oracle {
public:
    explicit ScriptedOracle(const PortableObjectCatalog& catalog) : catalog_(catalog) {}

    OracleResponse complete(const OracleRequest& request) override {
        if (request.mode == OracleMode::YesNo) {
            return {request.traceback_cost <= request.remaining_steps ? "YES" : "NO", false};
        }
        if (request.candidates.empty()) throw std::invalid_argument("scripted oracle: empty candidate list");

        std::vector<std::string> portables;
        for (const std::string& c : request.candidates) {
            if (catalog_.contains(c)) portables.push_back(c);
        }
        if (!portables.empty()) {
            return {*std::min_element(portables.begin(), portables.end()), false};
        }

        std::vector<std::string> pool = request.candidates;
        if (!request.history.empty()) {
            std::vector<std::string> fresh;
            for (const std::string& c : pool) {
                if (std::find(request.history.begin(), request.history.end(), c) == request.history.end()) {
                    fresh.push_back(c);
                }
            }
            if (!fresh.empty()) pool = std::move(fresh);
        }

        std::string best;
        int best_score = -1;
        for (const std::string& c : pool) {
            int score = 0;
            if (auto room = furniture_room(c)) score = catalog_.portables_mapped_to(*room);
            if (score > best_score || (score == best_score && c < best)) {
                best = c;
                best_score = score;
            }
        }
        return {best, false};
    }

private:
    const PortableObjectCatalog& catalog_;
};

// ---------------------------------------------------------------------------
// Answer normalization shared by the HTTP and replay oracles.

inline std::string normalize_token(std::string s) {
    std::string out;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == ' ' || c == '-') {
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    // collapse/trim spaces
    std::string trimmed;
    bool pending_space = false;
    for (char c : out) {
        if (c == ' ') {
            pending_space = !trimmed.empty();
        } else {
            if (pending_space) trimmed += ' ';
            pending_space = false;
            trimmed += c;
        }
    }
    return trimmed;
}

// Case/punctuation-tolerant parse of a model reply. Returns the canonical
// candidate name, or YES/NO for yes-no questions.
inline std::optional<std::string> parse_oracle_reply(const std::string& raw, const OracleRequest& request) {
    std::string norm = normalize_token(raw);
    if (request.mode == OracleMode::YesNo) {
        if (norm.rfind("yes", 0) == 0) return "YES";
        if (norm.rfind("no", 0) == 0) return "NO";
        return std::nullopt;
    }
    for (const std::string& c : request.candidates) {
        if (normalize_token(c) == norm) return c;
    }
    return std::nullopt;
}

inline std::uint64_t request_hash(const OracleRequest& request) {
    nlohmann::ordered_json j;
    j["system"] = request.system_context;
    j["user"] = request.user_query;
    j["mode"] = request.mode == OracleMode::YesNo ? "yesno" : "choose";
    j["candidates"] = request.candidates;
    return fnv1a64(j.dump());
}

// Records request/response traffic as JSON lines for deterministic replays.
class TrafficRecorder {
public:
    explicit TrafficRecorder(const std::string& path) : out_(path, std::ios::app) {
        if (!out_) throw std::runtime_error("cannot open replay file for writing: " + path);
    }

    void record(const OracleRequest& request, const std::string& raw_reply) {
        nlohmann::ordered_json j;
        j["hash"] = request_hash(request);
        j["system"] = request.system_context;
        j["user"] = request.user_query;
        j["reply"] = raw_reply;
        std::lock_guard<std::mutex> lock(mutex_);
        out_ << j.dump() << "\n";
        out_.flush();
    }

private:
    std::ofstream out_;
    std::mutex mutex_;
};

// Replays recorded traffic; requests are matched exactly by hash.
class ReplayOracle : public Oracle {
public:
    explicit ReplayOracle(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open replay file: " + path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line);
            replies_[j.at("hash").get<std::uint64_t>()] = j.at("reply").get<std::string>();
        }
    }

    OracleResponse complete(const OracleRequest& request) override {
        auto it = replies_.find(request_hash(request));
        if (it == replies_.end()) throw std::runtime_error("replay oracle: no recorded response for request");
        auto parsed = parse_oracle_reply(it->second, request);
        if (!parsed) throw std::runtime_error("replay oracle: recorded reply does not parse: " + it->second);
        return {*parsed, false};
    }

private:
    std::map<std::uint64_t, std::string> replies_;
};

struct LlmEndpointConfig {
    std::string base_url = "http://localhost:8080";
    std::string path = "/v1/chat/completions";
    std::string model = "gpt-4";
    double temperature = 0.0;
    std::string api_key_env = "PNAV_ORACLE_API_KEY";
    int max_attempts = 3;          // network retries
    int backoff_ms = 250;          // doubles per attempt
    int requests_per_minute = 0;   // 0 = unlimited
    std::string record_path;       // optional traffic recording
};

}  // namespace pnav
