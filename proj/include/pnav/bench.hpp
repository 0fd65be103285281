#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pnav/agent.hpp"
#include "pnav/episode.hpp"
#include "pnav/oracle.hpp"
#include "pnav/schedule.hpp"
#include "pnav/solver.hpp"

namespace pnav {

struct EpisodeSummary {
    int episode = 0;
    std::string start;
    bool success = false;
    int steps = 0;
    int unique_found = 0;
    int total_reward = 0;
    std::vector<std::string> found;
    std::map<std::string, int> visit_counts;
    int optimal_value = -1;  // wait-allowing DP bound for this episode's schedule
};

struct TrialLog {
    std::uint64_t trial_seed = 0;
    std::vector<EpisodeSummary> episodes;

    int successful_episodes() const {
        int count = 0;
        for (const EpisodeSummary& e : episodes) count += e.success ? 1 : 0;
        return count;
    }
};

// SR = (100 / trials) * sum(successful episodes / total episodes).
inline double success_rate(const std::vector<TrialLog>& trials) {
    if (trials.empty()) throw std::invalid_argument("success_rate: no trials");
    double acc = 0.0;
    for (const TrialLog& t : trials) {
        if (t.episodes.empty()) throw std::invalid_argument("success_rate: trial without episodes");
        acc += static_cast<double>(t.successful_episodes()) / static_cast<double>(t.episodes.size());
    }
    return 100.0 * acc / static_cast<double>(trials.size());
}

// SRPL = SR / ln(cumulative steps). SR already carries the percentage factor,
// which is the only reading of the published formula whose magnitudes match
// the published table; the log is natural.
inline double srpl(double sr, double cumulative_steps) {
    if (cumulative_steps < 2.0) throw std::invalid_argument("srpl: cumulative path length must be >= 2");
    if (sr == 0.0) return 0.0;
    return sr / std::log(cumulative_steps);
}

struct CoverageStats {
    double mean_episode_pct = 0.0;
    double total_unique_pct = 0.0;
};

inline CoverageStats coverage_stats(const std::vector<TrialLog>& trials, std::size_t scan_size) {
    CoverageStats out;
    if (scan_size == 0) throw std::invalid_argument("coverage_stats: empty scan");
    std::size_t episodes = 0;
    std::set<std::string> all_visited;
    double acc = 0.0;
    for (const TrialLog& t : trials) {
        for (const EpisodeSummary& e : t.episodes) {
            acc += 100.0 * static_cast<double>(e.visit_counts.size()) / static_cast<double>(scan_size);
            ++episodes;
            for (const auto& [node, _] : e.visit_counts) all_visited.insert(node);
        }
    }
    if (episodes == 0) throw std::invalid_argument("coverage_stats: no episodes");
    out.mean_episode_pct = acc / static_cast<double>(episodes);
    out.total_unique_pct = 100.0 * static_cast<double>(all_visited.size()) / static_cast<double>(scan_size);
    return out;
}

inline std::map<std::string, int> object_frequency(const std::vector<TrialLog>& trials) {
    std::map<std::string, int> counts;
    for (const TrialLog& t : trials) {
        for (const EpisodeSummary& e : t.episodes) {
            for (const std::string& obj : e.found) counts[obj] += 1;
        }
    }
    return counts;
}

struct BenchProtocol {
    int trials = 10;
    int episodes = 20;
    int horizon = 30;  // timesteps per episode

    void validate() const {
        if (trials <= 0 || episodes <= 0 || horizon <= 0) {
            throw std::invalid_argument("bench protocol error: trials/episodes/horizon must be positive");
        }
    }
};

struct BenchReport {
    double sr = 0.0;
    double srpl_value = 0.0;
    long long cumulative_steps = 0;
    CoverageStats coverage;
    std::map<std::string, int> find_frequency;
    std::vector<TrialLog> trials;
    std::string scheme;
    std::string agent;
    BenchProtocol protocol;
    std::uint64_t base_seed = 0;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["agent"] = agent;
        j["scheme"] = scheme;
        j["protocol"] = {{"trials", protocol.trials}, {"episodes", protocol.episodes}, {"T", protocol.horizon}};
        j["seed"] = base_seed;
        j["sr"] = sr;
        j["srpl"] = srpl_value;
        j["cumulative_steps"] = cumulative_steps;
        j["coverage"] = {{"mean_episode_pct", coverage.mean_episode_pct},
                         {"total_unique_pct", coverage.total_unique_pct}};
        j["find_frequency"] = find_frequency;
        j["trials"] = nlohmann::ordered_json::array();
        for (const TrialLog& t : trials) {
            nlohmann::ordered_json jt;
            jt["trial_seed"] = t.trial_seed;
            jt["episodes"] = nlohmann::ordered_json::array();
            for (const EpisodeSummary& e : t.episodes) {
                jt["episodes"].push_back({{"episode", e.episode},
                                          {"start", e.start},
                                          {"success", e.success},
                                          {"steps", e.steps},
                                          {"unique_found", e.unique_found},
                                          {"total_reward", e.total_reward},
                                          {"found", e.found},
                                          {"optimal_value", e.optimal_value}});
            }
            j["trials"].push_back(std::move(jt));
        }
        return j;
    }

    // episode-by-node visit count matrix, trial-major
    std::string heatmap_csv(const std::vector<std::string>& node_ids) const {
        std::ostringstream out;
        out << "trial,episode";
        for (const std::string& id : node_ids) out << ',' << id;
        out << '\n';
        for (std::size_t ti = 0; ti < trials.size(); ++ti) {
            for (const EpisodeSummary& e : trials[ti].episodes) {
                out << ti << ',' << e.episode;
                for (const std::string& id : node_ids) {
                    auto it = e.visit_counts.find(id);
                    out << ',' << (it == e.visit_counts.end() ? 0 : it->second);
                }
                out << '\n';
            }
        }
        return out.str();
    }

    std::string summary_csv() const {
        std::ostringstream out;
        out << "agent,scheme,trials,episodes,T,sr,srpl,cumulative_steps,mean_episode_coverage_pct,total_unique_coverage_pct\n";
        out << agent << ',' << scheme << ',' << protocol.trials << ',' << protocol.episodes << ','
            << protocol.horizon << ',' << sr << ',' << srpl_value << ',' << cumulative_steps << ','
            << coverage.mean_episode_pct << ',' << coverage.total_unique_pct << '\n';
        return out.str();
    }
};

using AgentFactory = std::function<std::unique_ptr<LgxAgent>(std::uint64_t trial_seed)>;

// The full trial protocol. Schedules are rebuilt per episode under the scheme
// rules; each trial gets a fresh agent (memory persists across its episodes
// and dies with it) and a derived base seed, so trials are independent and
// the whole run is a pure function of (inputs, seeds). Start nodes are drawn
// per episode; with a deterministic oracle and a routine scheme a fixed start
// would make all episodes of a trial identical.
inline BenchReport run_benchmark(const ScanGraph& scan, const PortableObjectCatalog& catalog, Scheme scheme,
                                 const AgentFactory& make_agent, const std::string& agent_name,
                                 const BenchProtocol& protocol, std::uint64_t base_seed,
                                 const ScheduleConfig& schedule_template = {},
                                 bool attach_optimal_bound = false) {
    protocol.validate();
    BenchReport report;
    report.scheme = std::string(scheme_name(scheme));
    report.agent = agent_name;
    report.protocol = protocol;
    report.base_seed = base_seed;

    for (int trial = 0; trial < protocol.trials; ++trial) {
        std::uint64_t trial_seed = seed_combine({base_seed, fnv1a64("trial"), static_cast<std::uint64_t>(trial)});
        ScheduleConfig cfg = schedule_template;
        cfg.horizon = protocol.horizon;
        cfg.base_seed = trial_seed;

        auto agent = make_agent(trial_seed);
        TrialLog trial_log;
        trial_log.trial_seed = trial_seed;

        for (int episode = 0; episode < protocol.episodes; ++episode) {
            PlacementSchedule schedule = build_schedule(scan, catalog, cfg, scheme, episode);
            EpisodeEngine engine(scan, schedule);
            std::uint64_t start_seed =
                seed_combine({trial_seed, fnv1a64("start"), static_cast<std::uint64_t>(episode)});
            Rng start_rng(start_seed);
            const std::string start_id = scan.node(start_rng.uniform_index(scan.size())).id;

            engine.reset(start_id);
            agent->begin_episode(engine);
            EpisodeTrace trace = run_episode(engine, agent->as_policy(), start_id);

            EpisodeSummary summary;
            summary.episode = episode;
            summary.start = start_id;
            summary.success = trace.success();
            summary.steps = static_cast<int>(trace.steps.size());
            summary.unique_found = static_cast<int>(trace.found.size());
            summary.total_reward = trace.total_reward;
            summary.found = trace.found;
            summary.visit_counts = trace.visit_counts;
            if (attach_optimal_bound && schedule.object_count() <= 12) {
                summary.optimal_value = optimal_value(scan, schedule, start_id, -1, /*allow_wait=*/true).max_objects;
            }
            report.cumulative_steps += summary.steps;
            trial_log.episodes.push_back(std::move(summary));
        }
        report.trials.push_back(std::move(trial_log));
    }

    report.sr = success_rate(report.trials);
    report.srpl_value = report.cumulative_steps >= 2 ? srpl(report.sr, static_cast<double>(report.cumulative_steps)) : 0.0;
    report.coverage = coverage_stats(report.trials, scan.size());
    report.find_frequency = object_frequency(report.trials);
    return report;
}

}  // namespace pnav
