#pragma once

#include <chrono>
#include <cstdlib>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "pnav/oracle.hpp"

namespace pnav {

// Chat-completion client. Sends the rendered prompts to an external endpoint,
// parses the one-word reply, retries once on a malformed answer and falls
// back to the scripted oracle after that. Network failures retry with
// exponential backoff. All traffic can be recorded for replay runs.
class LlmOracle : public Oracle {
public:
    LlmOracle(LlmEndpointConfig config, Oracle& fallback)
        : config_(std::move(config)), fallback_(fallback) {
        if (!config_.record_path.empty()) {
            recorder_ = std::make_unique<TrafficRecorder>(config_.record_path);
        }
    }

    OracleResponse complete(const OracleRequest& request) override {
        for (int parse_attempt = 0; parse_attempt < 2; ++parse_attempt) {
            std::string raw = post_with_retries(request);
            if (recorder_) recorder_->record(request, raw);
            if (auto parsed = parse_oracle_reply(raw, request)) {
                return {*parsed, false};
            }
        }
        ++fallback_count_;
        OracleResponse out = fallback_.complete(request);
        out.used_fallback = true;
        return out;
    }

    int fallback_count() const { return fallback_count_; }

private:
    std::string post_with_retries(const OracleRequest& request) {
        nlohmann::ordered_json body;
        body["model"] = config_.model;
        body["temperature"] = config_.temperature;
        body["messages"] = {{{"role", "system"}, {"content", request.system_context}},
                            {{"role", "user"}, {"content", request.user_query}}};
        std::string payload = body.dump();

        const char* key = std::getenv(config_.api_key_env.c_str());
        httplib::Client client(config_.base_url);
        client.set_connection_timeout(10);
        client.set_read_timeout(30);
        if (key && *key) client.set_bearer_token_auth(key);

        std::string last_error;
        for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(config_.backoff_ms << (attempt - 1)));
            }
            throttle();
            auto res = client.Post(config_.path, payload, "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status != 200) {
                last_error = "HTTP " + std::to_string(res->status);
                continue;
            }
            try {
                nlohmann::json j = nlohmann::json::parse(res->body);
                return j.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                last_error = std::string("malformed response body: ") + e.what();
            }
        }
        throw std::runtime_error("llm oracle: request failed after " + std::to_string(config_.max_attempts) +
                                 " attempts (" + last_error + ")");
    }

    void throttle() {
        if (config_.requests_per_minute <= 0) return;
        auto min_gap = std::chrono::milliseconds(60000 / config_.requests_per_minute);
        auto now = std::chrono::steady_clock::now();
        if (last_request_ != std::chrono::steady_clock::time_point{} && now - last_request_ < min_gap) {
            std::this_thread::sleep_for(min_gap - (now - last_request_));
        }
        last_request_ = std::chrono::steady_clock::now();
    }

    LlmEndpointConfig config_;
    Oracle& fallback_;
    std::unique_ptr<TrafficRecorder> recorder_;
    int fallback_count_ = 0;
    std::chrono::steady_clock::time_point last_request_;
};

}  // namespace pnav
